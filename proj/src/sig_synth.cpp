#include "ktaint/sig_synth.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include "ktaint/error.hpp"

namespace ktaint {

namespace {

constexpr std::string_view kDefaultSuffix = "$default";
constexpr std::string_view kDefaultMarker =
    "kotlin.jvm.internal.DefaultConstructorMarker";

std::string capitalize_first(const std::string& name) {
  std::string out = name;
  if (!out.empty()) {
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  }
  return out;
}

std::vector<std::string> render_all(const std::vector<KotlinTypeExpr>& types,
                                    const TypeRenderer& render) {
  std::vector<std::string> out;
  out.reserve(types.size());
  for (const auto& t : types) out.push_back(render(t));
  return out;
}

enum class OperatorFamily { kUnary, kBinary, kIndexGet, kIndexSet, kInvoke };

struct OperatorRow {
  std::string_view symbol;
  OperatorFamily family;
  std::string_view function;
};

// `+` and `-` appear twice; the operand count picks the row.
constexpr OperatorRow kOperatorRows[] = {
    {"+", OperatorFamily::kUnary, "unaryPlus"},
    {"-", OperatorFamily::kUnary, "unaryMinus"},
    {"!", OperatorFamily::kUnary, "not"},
    {"++", OperatorFamily::kUnary, "inc"},
    {"--", OperatorFamily::kUnary, "dec"},
    {"+obj", OperatorFamily::kUnary, "unaryPlus"},
    {"-obj", OperatorFamily::kUnary, "unaryMinus"},
    {"!obj", OperatorFamily::kUnary, "not"},
    {"++obj", OperatorFamily::kUnary, "inc"},
    {"--obj", OperatorFamily::kUnary, "dec"},
    {"obj++", OperatorFamily::kUnary, "inc"},
    {"obj--", OperatorFamily::kUnary, "dec"},
    {"+", OperatorFamily::kBinary, "plus"},
    {"-", OperatorFamily::kBinary, "minus"},
    {"*", OperatorFamily::kBinary, "times"},
    {"/", OperatorFamily::kBinary, "div"},
    {"%", OperatorFamily::kBinary, "rem"},
    {"..", OperatorFamily::kBinary, "rangeTo"},
    {"+=", OperatorFamily::kBinary, "plusAssign"},
    {"-=", OperatorFamily::kBinary, "minusAssign"},
    {"*=", OperatorFamily::kBinary, "timesAssign"},
    {"/=", OperatorFamily::kBinary, "divAssign"},
    {"%=", OperatorFamily::kBinary, "remAssign"},
    {"==", OperatorFamily::kBinary, "equals"},
    {"!=", OperatorFamily::kBinary, "equals"},
    {"in", OperatorFamily::kBinary, "contains"},
    {"!in", OperatorFamily::kBinary, "contains"},
    {">", OperatorFamily::kBinary, "compareTo"},
    {"<", OperatorFamily::kBinary, "compareTo"},
    {">=", OperatorFamily::kBinary, "compareTo"},
    {"<=", OperatorFamily::kBinary, "compareTo"},
    {"[]", OperatorFamily::kIndexGet, "get"},
    {"[]=", OperatorFamily::kIndexSet, "set"},
    {"()", OperatorFamily::kInvoke, "invoke"},
};

bool family_accepts(OperatorFamily family, std::size_t operands) {
  switch (family) {
    case OperatorFamily::kUnary:
      return operands == 0;
    case OperatorFamily::kBinary:
      return operands == 1;
    case OperatorFamily::kIndexGet:
      return operands >= 1;
    case OperatorFamily::kIndexSet:
      return operands >= 2;
    case OperatorFamily::kInvoke:
      return true;
  }
  return false;
}

std::string_view expected_operands(OperatorFamily family) {
  switch (family) {
    case OperatorFamily::kUnary:
      return "no operands";
    case OperatorFamily::kBinary:
      return "exactly one operand";
    case OperatorFamily::kIndexGet:
      return "at least one index";
    case OperatorFamily::kIndexSet:
      return "at least one index and the assigned value";
    case OperatorFamily::kInvoke:
      return "any number of arguments";
  }
  return "";
}

}  // namespace

TypeRenderer mapping_renderer() {
  return [](const KotlinTypeExpr& t) { return map_type(t).name; };
}

std::vector<MethodSignature> property_accessors(const std::string& class_name,
                                                const std::string& prop_name,
                                                const KotlinTypeExpr& prop_type,
                                                AccessorWant want,
                                                const TypeRenderer& render) {
  if (prop_name.empty()) throw SpecError("property name must not be empty");
  std::vector<MethodSignature> out;
  const std::string type = render(prop_type);
  const std::string suffix = capitalize_first(prop_name);
  if (want != AccessorWant::kSetter) {
    out.push_back({class_name, type, "get" + suffix, {}, false, false});
  }
  if (want != AccessorWant::kGetter) {
    out.push_back({class_name, "void", "set" + suffix, {type}, false, false});
  }
  return out;
}

std::string top_level_class(std::string_view package_name,
                            std::string_view file_name) {
  if (file_name.ends_with(".kt")) file_name.remove_suffix(3);
  std::string out;
  if (!package_name.empty()) {
    out += package_name;
    out += '.';
  }
  out += file_name;
  out += "Kt";
  return out;
}

MethodSignature extension_signature(const std::string& container,
                                    const KotlinTypeExpr& receiver,
                                    const std::string& name,
                                    const std::vector<KotlinTypeExpr>& params,
                                    const KotlinTypeExpr& ret,
                                    const TypeRenderer& render) {
  MethodSignature sig{container, render(ret), name, {}, false, false};
  sig.params.push_back(render(receiver));
  for (auto& p : render_all(params, render)) sig.params.push_back(std::move(p));
  return sig;
}

MethodSignature extension_property_getter(const std::string& container,
                                          const KotlinTypeExpr& receiver,
                                          const std::string& prop_name,
                                          const KotlinTypeExpr& prop_type,
                                          const TypeRenderer& render) {
  MethodSignature getter = property_accessors(container, prop_name, prop_type,
                                              AccessorWant::kGetter, render)
                               .front();
  getter.params.insert(getter.params.begin(), render(receiver));
  return getter;
}

std::string companion_wrapper(const std::string& class_name,
                              const std::optional<std::string>& companion_name) {
  return class_name + "$" + companion_name.value_or("Companion");
}

MethodSignature infix_signature(const KotlinTypeExpr& receiver,
                                const std::string& name,
                                const std::vector<KotlinTypeExpr>& params,
                                const KotlinTypeExpr& ret,
                                const TypeRenderer& render) {
  if (params.size() != 1) {
    throw SpecError("infix function '" + name +
                    "' must have exactly one parameter, got " +
                    std::to_string(params.size()));
  }
  return {render(receiver), render(ret), name, {render(params.front())},
          false, false};
}

const std::vector<std::string>& supported_operator_symbols() {
  static const std::vector<std::string> symbols = [] {
    std::vector<std::string> out;
    for (const auto& row : kOperatorRows) {
      if (std::find(out.begin(), out.end(), row.symbol) == out.end()) {
        out.emplace_back(row.symbol);
      }
    }
    return out;
  }();
  return symbols;
}

std::string operator_function_name(std::string_view symbol,
                                   std::size_t operand_count) {
  const OperatorRow* known = nullptr;
  for (const auto& row : kOperatorRows) {
    if (row.symbol != symbol) continue;
    known = &row;
    if (family_accepts(row.family, operand_count)) {
      return std::string(row.function);
    }
  }
  if (known == nullptr) {
    std::string message = "unknown operator '" + std::string(symbol) +
                          "'; supported:";
    for (const auto& s : supported_operator_symbols()) message += " " + s;
    throw SpecError(message);
  }
  throw SpecError("operator '" + std::string(symbol) + "' takes " +
                  std::string(expected_operands(known->family)) + ", got " +
                  std::to_string(operand_count));
}

MethodSignature operator_signature(std::string_view symbol,
                                   const KotlinTypeExpr& receiver,
                                   const std::vector<KotlinTypeExpr>& operand_types,
                                   const KotlinTypeExpr& ret,
                                   const TypeRenderer& render) {
  return {render(receiver), render(ret),
          operator_function_name(symbol, operand_types.size()),
          render_all(operand_types, render), false, false};
}

std::vector<SignatureVariant> default_variants(const MethodSignature& sig,
                                               DefaultsKind kind) {
  std::vector<SignatureVariant> out;
  out.push_back({sig, identity_slot_map(sig.arity()), VariantOrigin::kBase});

  SignatureVariant generated;
  generated.origin = VariantOrigin::kDefaultArgs;
  MethodSignature& g = generated.signature;
  g = sig;
  switch (kind) {
    case DefaultsKind::kConstructor:
      g.params.push_back("int");
      g.params.emplace_back(kDefaultMarker);
      generated.slot_map = identity_slot_map(sig.arity());
      break;
    case DefaultsKind::kTopLevel:
      g.name += kDefaultSuffix;
      g.is_static = true;
      g.params.push_back("int");
      g.params.push_back("java.lang.Object");
      generated.slot_map = identity_slot_map(sig.arity());
      break;
    case DefaultsKind::kMember:
      g.name += kDefaultSuffix;
      g.is_static = true;
      g.params.insert(g.params.begin(), sig.declaring_class);
      g.params.push_back("int");
      g.params.push_back("java.lang.Object");
      generated.slot_map.emplace(SlotRef::this_slot(), SlotRef::param(0));
      for (std::size_t i = 0; i < sig.arity(); ++i) {
        generated.slot_map.emplace(SlotRef::param(i), SlotRef::param(i + 1));
      }
      generated.slot_map.emplace(SlotRef::ret(), SlotRef::ret());
      break;
  }
  out.push_back(std::move(generated));
  return out;
}

SignatureVariant sealed_ctor_variant(const MethodSignature& sig) {
  if (!sig.is_constructor) {
    throw SpecError("sealed constructor variant requires a constructor, got '" +
                    sig.to_string() + "'");
  }
  SignatureVariant v{sig, identity_slot_map(sig.arity()),
                     VariantOrigin::kSealedCtor};
  v.signature.params.emplace_back(kDefaultMarker);
  return v;
}

SignatureVariant internal_mangle(const MethodSignature& sig,
                                 std::string_view module_name,
                                 std::string* warning) {
  if (sig.is_constructor || sig.is_static) {
    throw SpecError("internal name mangling applies to member functions and "
                    "property accessors only, got '" + sig.to_string() + "'");
  }
  std::string module(module_name);
  std::replace(module.begin(), module.end(), '-', '_');
  if (module.empty() && warning != nullptr) {
    *warning = "empty module name for internal member '" + sig.name + "'";
  }
  SignatureVariant v{sig, identity_slot_map(sig.arity()),
                     VariantOrigin::kInternalMangled};
  v.signature.name += "-" + module;
  return v;
}

std::string_view to_string(SyntheticNameKind kind) {
  switch (kind) {
    case SyntheticNameKind::kDefaultVariant:
      return "default_variant";
    case SyntheticNameKind::kCompanionWrapper:
      return "companion_wrapper";
    case SyntheticNameKind::kCompanionAccessBridge:
      return "companion_access_bridge";
    case SyntheticNameKind::kLocalFunction:
      return "local_function";
    case SyntheticNameKind::kLambdaWrapper:
      return "lambda_wrapper";
    case SyntheticNameKind::kInlineImpl:
      return "inline_impl";
    case SyntheticNameKind::kInlineBox:
      return "inline_box";
    case SyntheticNameKind::kInlineUnbox:
      return "inline_unbox";
    case SyntheticNameKind::kInternalMangled:
      return "internal_mangled";
    case SyntheticNameKind::kPlain:
      return "plain";
  }
  return "plain";
}

SyntheticNameKind classify_generated_name(std::string_view name) {
  static const std::regex lambda_wrapper(R"(.+\$[0-9]+)");
  static const std::regex local_function(
      R"([A-Za-z_][A-Za-z0-9_]*\$[A-Za-z_][A-Za-z0-9_]*(-[0-9]+)?)");

  if (name.ends_with(kDefaultSuffix)) return SyntheticNameKind::kDefaultVariant;
  if (name == "box-impl") return SyntheticNameKind::kInlineBox;
  if (name == "unbox-impl") return SyntheticNameKind::kInlineUnbox;
  if (name.ends_with("-impl")) return SyntheticNameKind::kInlineImpl;
  if (name.starts_with("access$")) {
    return SyntheticNameKind::kCompanionAccessBridge;
  }
  if (name.ends_with("$Companion")) return SyntheticNameKind::kCompanionWrapper;
  const std::string text(name);
  if (std::regex_match(text, lambda_wrapper)) {
    return SyntheticNameKind::kLambdaWrapper;
  }
  if (std::regex_match(text, local_function)) {
    return SyntheticNameKind::kLocalFunction;
  }
  if (name.find('-') != std::string_view::npos && !name.starts_with('-')) {
    return SyntheticNameKind::kInternalMangled;
  }
  return SyntheticNameKind::kPlain;
}

}  // namespace ktaint
