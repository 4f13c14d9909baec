#include "ktaint/signature.hpp"

#include <cctype>

#include "ktaint/error.hpp"
#include "ktaint/kotlin_types.hpp"

namespace ktaint {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(std::string_view text, const std::string& message) {
  throw ParseError(message + " in signature '" + std::string(text) + "'", 0, 0);
}

bool kotlin_types_match(const KotlinTypeExpr& pattern,
                        const KotlinTypeExpr& actual) {
  if (pattern.is_wildcard() || pattern.is_type_variable()) return true;
  if ((pattern.base == "*[]" || pattern.base == "_[]") &&
      pattern.type_args.empty() && actual.base.ends_with("[]")) {
    return true;
  }
  if (pattern.base != actual.base || pattern.nullable != actual.nullable ||
      pattern.fn_arity != actual.fn_arity ||
      pattern.type_args.size() != actual.type_args.size()) {
    return false;
  }
  for (std::size_t i = 0; i < pattern.type_args.size(); ++i) {
    if (!kotlin_types_match(pattern.type_args[i], actual.type_args[i])) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::string MethodSignature::to_string() const {
  std::string out = declaring_class;
  out += ": ";
  out += return_type;
  out += ' ';
  out += name;
  out += '(';
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i > 0) out += ',';
    out += params[i];
  }
  out += ')';
  return out;
}

std::vector<std::string> split_type_list(std::string_view text) {
  std::vector<std::string> parts;
  text = trim(text);
  if (text.empty()) return parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      ++i;
    } else if (c == '<' || c == '(') {
      ++depth;
    } else if (c == '>' || c == ')') {
      --depth;
    } else if (c == ',' && depth == 0) {
      parts.emplace_back(trim(text.substr(start, i - start)));
      start = i + 1;
    }
  }
  parts.emplace_back(trim(text.substr(start)));
  return parts;
}

MethodSignature parse_signature(std::string_view text, bool is_static) {
  const std::string_view original = text;
  text = trim(text);
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos) fail(original, "missing ':'");
  MethodSignature sig;
  sig.declaring_class = std::string(trim(text.substr(0, colon)));
  if (sig.declaring_class.empty()) fail(original, "missing declaring class");
  if (sig.declaring_class.find(' ') != std::string::npos) {
    fail(original, "declaring class contains a space");
  }

  std::string_view rest = trim(text.substr(colon + 1));
  if (rest.empty() || rest.back() != ')') fail(original, "missing parameter list");
  // The parameter list is the balanced group that closes the text.
  int depth = 0;
  std::size_t open = std::string_view::npos;
  for (std::size_t i = rest.size(); i-- > 0;) {
    if (rest[i] == ')') {
      ++depth;
    } else if (rest[i] == '(') {
      if (--depth == 0) {
        open = i;
        break;
      }
    }
  }
  if (open == std::string_view::npos) fail(original, "unbalanced parentheses");

  const std::string_view head = trim(rest.substr(0, open));
  const std::size_t space = head.find_last_of(" \t");
  if (space == std::string_view::npos) {
    fail(original, "expected '<return> <name>' before the parameter list");
  }
  sig.name = std::string(trim(head.substr(space + 1)));
  sig.return_type = std::string(trim(head.substr(0, space)));
  if (sig.name.empty() || sig.return_type.empty()) {
    fail(original, "missing return type or method name");
  }
  for (auto& param : split_type_list(rest.substr(open + 1, rest.size() - open - 2))) {
    if (param.empty()) fail(original, "empty parameter type");
    sig.params.push_back(std::move(param));
  }
  sig.is_static = is_static;
  sig.is_constructor = sig.name == kConstructorName;
  return sig;
}

bool type_text_matches(std::string_view pattern, std::string_view actual) {
  pattern = trim(pattern);
  actual = trim(actual);
  if (pattern == actual) return true;
  if (is_wildcard_type_text(pattern)) return true;
  try {
    return kotlin_types_match(parse_kotlin_type(pattern),
                              parse_kotlin_type(actual));
  } catch (const ParseError&) {
    return false;
  }
}

bool signature_matches(const MethodSignature& pattern,
                       const MethodSignature& actual) {
  if (pattern.declaring_class != actual.declaring_class ||
      pattern.name != actual.name || pattern.arity() != actual.arity()) {
    return false;
  }
  if (!type_text_matches(pattern.return_type, actual.return_type)) return false;
  for (std::size_t i = 0; i < pattern.arity(); ++i) {
    if (!type_text_matches(pattern.params[i], actual.params[i])) return false;
  }
  return true;
}

std::string SlotRef::to_string() const {
  switch (kind) {
    case Kind::kThis:
      if (!receiver_kind) return "this";
      return *receiver_kind == ReceiverKind::kDispatch ? "this[dispatch]"
                                                        : "this[extension]";
    case Kind::kParam:
      return "param(" + std::to_string(index) + ")";
    case Kind::kReturn:
      return "return";
  }
  return "?";
}

std::string_view to_string(VariantOrigin origin) {
  switch (origin) {
    case VariantOrigin::kBase:
      return "base";
    case VariantOrigin::kDefaultArgs:
      return "default_args";
    case VariantOrigin::kSealedCtor:
      return "sealed_ctor";
    case VariantOrigin::kInternalMangled:
      return "internal_mangled";
  }
  return "?";
}

SlotRef SignatureVariant::remap(const SlotRef& slot) const {
  SlotRef key = slot;
  key.receiver_kind.reset();
  auto it = slot_map.find(key);
  return it == slot_map.end() ? slot : it->second;
}

std::map<SlotRef, SlotRef> identity_slot_map(std::size_t arity) {
  std::map<SlotRef, SlotRef> map;
  map.emplace(SlotRef::this_slot(), SlotRef::this_slot());
  for (std::size_t i = 0; i < arity; ++i) {
    map.emplace(SlotRef::param(i), SlotRef::param(i));
  }
  map.emplace(SlotRef::ret(), SlotRef::ret());
  return map;
}

}  // namespace ktaint
