#include "properties.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "inliner_oracle.hpp"
#include "ktaint/corpus.hpp"
#include "ktaint/engine.hpp"
#include "ktaint/ir.hpp"
#include "ktaint/kotlin_types.hpp"
#include "ktaint/report.hpp"
#include "ktaint/sig_synth.hpp"
#include "ktaint/signature.hpp"
#include "ktaint/spec_dsl.hpp"
#include "random_programs.hpp"

namespace ktaint::testing {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::size_t pick(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(eng_);
  }
  bool coin(std::size_t one_in = 2) { return pick(0, one_in - 1) == 0; }
  template <typename T>
  const T& any_of(const std::vector<T>& v) {
    return v[pick(0, v.size() - 1)];
  }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

// Runs `body` per case; a body returns an empty string on success.
template <typename Body>
PropertyOutcome run_cases(std::string name, std::size_t cases, Body body) {
  PropertyOutcome out{std::move(name), cases, 0, {}};
  for (std::size_t i = 0; i < cases; ++i) {
    std::string why;
    try {
      why = body(i);
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    if (!why.empty()) {
      if (out.failures++ == 0) out.first_failure = "case " + std::to_string(i) + ": " + why;
    }
  }
  return out;
}

std::set<std::string> manifest(const std::vector<Finding>& fs) {
  std::set<std::string> s;
  for (const auto& f : fs) {
    s.insert(f.query_id + " " + f.source.to_string() + " " + f.sink.to_string());
  }
  return s;
}

std::string first_missing(const std::set<std::string>& sub, const std::set<std::string>& sup) {
  for (const auto& x : sub) {
    if (!sup.count(x)) return x;
  }
  return {};
}

// ---- Kotlin types ----

// Function types never nest; the parser rejects them.
std::string kotlin_type_text(Rng& r, int depth, bool allow_fn = true) {
  static const std::vector<std::string> simple = {
      "Int", "String", "Long", "Boolean", "Char", "Any", "Unit", "Nothing", "IntArray",
      "ByteArray", "Double", "com.acme.Foo", "T", "java.util.Date", "CharSequence"};
  static const std::vector<std::string> generic1 = {"List", "MutableList", "Set", "Array",
                                                    "Iterable", "com.acme.Box"};
  const std::size_t kind = depth <= 0 ? 0 : r.pick(0, allow_fn ? 4 : 3);
  if (kind <= 1) return r.any_of(simple) + (r.coin(3) ? "?" : "");
  if (kind == 2 || kind == 3) {
    auto arg = [&] { return r.coin(6) ? std::string("*") : kotlin_type_text(r, depth - 1, allow_fn); };
    std::string t = kind == 2 ? r.any_of(generic1) + "<" + arg() + ">"
                              : "Map<" + arg() + ", " + arg() + ">";
    return t + (r.coin(3) ? "?" : "");
  }
  std::string t = "(";
  const std::size_t n = r.pick(0, 3);
  for (std::size_t i = 0; i < n; ++i) t += (i ? ", " : "") + kotlin_type_text(r, depth - 1, false);
  return t + ") -> " + kotlin_type_text(r, depth - 1, false);
}

// ---- signatures ----

std::string jvm_type(Rng& r) {
  static const std::vector<std::string> pool = {
      "int", "long", "boolean", "java.lang.String", "byte[]", "long[][]", "java.util.List",
      "java.lang.Object", "com.acme.Foo$Companion", "kotlin.jvm.functions.Function2",
      "java.util.Map<java.lang.String, java.lang.Integer>"};
  return r.any_of(pool);
}

std::string signature_text(Rng& r) {
  static const std::vector<std::string> classes = {"a.B", "com.acme.Repo", "x.y.Z$Companion",
                                                   "top.UtilKt"};
  static const std::vector<std::string> names = {"find", "get-core", "<init>", "run$default",
                                                 "access$getX", "invoke", "compareTo"};
  const std::string name = r.any_of(names);
  std::string s = r.any_of(classes) + ": " + (name == "<init>" ? "void" : jvm_type(r)) + " " +
                  name + "(";
  const std::size_t n = r.pick(0, 5);
  for (std::size_t i = 0; i < n; ++i) s += (i ? "," : "") + jvm_type(r);
  return s + ")";
}

MethodSignature random_signature(Rng& r, bool ctor) {
  MethodSignature sig = parse_signature(signature_text(r));
  if (ctor) {
    sig.name = std::string(kConstructorName);
    sig.return_type = "void";
    sig.is_constructor = true;
  } else if (sig.is_constructor) {
    sig.name = "make";
    sig.is_constructor = false;
  }
  return sig;
}

std::string check_slot_map(const MethodSignature& base, const SignatureVariant& v) {
  std::set<SlotRef> image;
  std::vector<SlotRef> domain{SlotRef::this_slot(), SlotRef::ret()};
  for (std::size_t i = 0; i < base.arity(); ++i) domain.push_back(SlotRef::param(i));
  for (const auto& s : domain) {
    const auto it = v.slot_map.find(s);
    if (it == v.slot_map.end()) return "slot " + s.to_string() + " unmapped";
    if (!image.insert(it->second).second) return "slot map not injective at " + s.to_string();
    if (it->second.kind == SlotRef::Kind::kParam && it->second.index >= v.signature.arity()) {
      return "slot " + s.to_string() + " mapped past arity";
    }
  }
  return {};
}

// ---- specs ----

struct RuleShape {
  std::string descriptor;
  std::vector<std::string> slots;  // allowed slot texts
  bool ctor = false;
  bool plain_method = false;
};

std::string quoted_types(const std::vector<std::string>& ts) {
  std::string s = "(";
  for (std::size_t i = 0; i < ts.size(); ++i) s += (i ? ", \"" : "\"") + ts[i] + "\"";
  return s + ")";
}

RuleShape random_rule_shape(Rng& r) {
  static const std::vector<std::string> types = {
      "Int", "String", "Long?", "Boolean", "List<String>", "Array<Int>", "IntArray", "Any?",
      "(Int) -> Unit", "com.acme.Foo", "Map<String, Int>", "Char", "Double", "UserId", "Name?"};
  static const std::vector<std::string> returns = {"Unit", "Int", "String?", "UserId",
                                                   "List<Name>", "Nothing"};
  auto params = [&](std::size_t lo, std::size_t hi) {
    std::vector<std::string> ps(r.pick(lo, hi));
    for (auto& p : ps) p = r.any_of(types);
    return ps;
  };
  auto param_slots = [](std::size_t n, std::vector<std::string> extra) {
    for (std::size_t i = 1; i <= n; ++i) extra.push_back("param" + std::to_string(i));
    return extra;
  };
  RuleShape s;
  switch (r.pick(0, 7)) {
    case 0: {
      const auto ps = params(0, 3);
      std::string list;
      for (std::size_t i = 0; i < ps.size(); ++i) list += (i ? ", " : "") + ps[i];
      s.plain_method = true;
      if (r.coin(3)) {
        s.ctor = true;
        s.descriptor = "method \"com.acme.Res: Unit <init>(" + list + ")\"";
        s.slots = param_slots(ps.size(), {"this"});
      } else {
        s.descriptor = "method \"Repo: " + r.any_of(returns) + " find(" + list + ")\"";
        s.slots = param_slots(ps.size(), {"this", "return"});
      }
      break;
    }
    case 1:
      if (r.coin()) {
        s.descriptor = "property getter class \"com.acme.User\" name \"email\" type \"" +
                       r.any_of(types) + "\"";
        s.slots = {"this", "return"};
      } else {
        s.descriptor = "property setter class \"com.acme.User\" name \"email\" type \"" +
                       r.any_of(types) + "\"";
        s.slots = {"this", "param1"};
      }
      break;
    case 2: {
      const auto ps = params(0, 3);
      std::string list;
      for (std::size_t i = 0; i < ps.size(); ++i) list += (i ? ", " : "") + ps[i];
      s.descriptor = "topLevel package \"com.acme\" file \"Util.kt\" method \"" +
                     r.any_of(returns) + " log(" + list + ")\"";
      s.slots = param_slots(ps.size(), {"return"});
      break;
    }
    case 3: {
      const auto ps = params(0, 3);
      s.descriptor = "extensionFunction at \"com.acme.ExtKt\" receiver \"" + r.any_of(types) +
                     "\" name \"shout\" params " + quoted_types(ps) + " returns \"" +
                     r.any_of(returns) + "\"";
      s.slots = param_slots(ps.size(), {"this[extension]", "return"});
      break;
    }
    case 4:
      s.descriptor = "extensionProperty at \"com.acme.ExtKt\" receiver \"com.acme.Emp\" name "
                     "\"size\" type \"" + r.any_of(types) + "\" getter";
      s.slots = {"this[extension]", "return"};
      break;
    case 5: {
      const auto ps = params(0, 2);
      s.descriptor = "companionExtension class \"com.acme.Cfg\"" +
                     std::string(r.coin() ? " companion \"Named\"" : "") +
                     " at \"com.acme.CfgKt\" name \"load\" params " + quoted_types(ps) +
                     " returns \"" + r.any_of(returns) + "\"";
      s.slots = param_slots(ps.size(), {"this[extension]", "return"});
      break;
    }
    case 6:
      s.descriptor = "infix receiver \"com.acme.Q\" name \"where\" param \"" + r.any_of(types) +
                     "\" returns \"com.acme.Q\"";
      s.slots = {"this", "param1", "return"};
      break;
    default: {
      static const std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> ops =
          {{"+", {0, 1}}, {"-", {0, 1}}, {"[]", {1, 4}}, {"[]=", {2, 5}}, {"()", {0, 3}},
           {"in", {1, 1}}, {"+=", {1, 1}}, {"++", {0, 0}}, {"<", {1, 1}}, {"==", {1, 1}}};
      const auto& op = ops[r.pick(0, ops.size() - 1)];
      const auto ps = params(op.second.first, op.second.second);
      s.descriptor = "operator \"" + op.first + "\" receiver \"com.acme.V\" operands " +
                     quoted_types(ps) + " returns \"" + r.any_of(returns) + "\"";
      s.slots = param_slots(ps.size(), {"this", "return"});
    }
  }
  return s;
}

std::string random_rule(Rng& r, const char* role) {
  const std::string role_name = role;
  RuleShape shape = random_rule_shape(r);
  // Roles with in-slots need something besides the return value.
  while (role_name != "source" && shape.slots.size() == 1 && shape.slots[0] == "return") {
    shape = random_rule_shape(r);
  }
  std::string text = std::string("  ") + role + " { " + shape.descriptor;
  if (shape.plain_method) {
    if (r.coin(4)) text += " no-defaults";
    if (shape.ctor && r.coin(3)) text += " sealed";
    if (!shape.ctor && r.coin(3)) text += " internal \"my-core\"";
  }
  auto slot_line = [&](const char* dir) {
    std::vector<std::string> slots = shape.slots;
    if (std::string(dir) == "in") {
      slots.erase(std::remove(slots.begin(), slots.end(), "return"), slots.end());
    }
    std::shuffle(slots.begin(), slots.end(), r.engine());
    slots.resize(std::min<std::size_t>(slots.size(), r.pick(1, 2)));
    std::string line = std::string(" ") + dir + " ";
    for (std::size_t i = 0; i < slots.size(); ++i) line += (i ? ", " : "") + slots[i];
    return line;
  };
  if (role_name != "source") text += slot_line("in");
  if (role_name == "source" || role_name == "propagator") text += slot_line("out");
  return text + " }\n";
}

std::string random_spec(Rng& r) {
  std::string text = "aliases { UserId = kotlin.Long Name = kotlin.String Repo = com.acme.UserRepo }\n";
  const std::size_t nq = r.pick(1, 3);
  for (std::size_t q = 0; q < nq; ++q) {
    text += "query \"q" + std::to_string(q) + "\" {\n";
    text += random_rule(r, "source");
    text += random_rule(r, "sink");
    static const char* roles[] = {"source", "sink", "sanitizer", "propagator"};
    for (std::size_t i = r.pick(0, 3); i > 0; --i) text += random_rule(r, roles[r.pick(0, 3)]);
    text += "}\n";
  }
  return text;
}

const char* role_keyword(Role role) {
  switch (role) {
    case Role::kSource: return "source";
    case Role::kSink: return "sink";
    case Role::kSanitizer: return "sanitizer";
    case Role::kPropagator: return "propagator";
  }
  return "source";
}

std::string slot_keyword(const SlotRef& s) {
  switch (s.kind) {
    case SlotRef::Kind::kThis: return "this";
    case SlotRef::Kind::kReturn: return "return";
    case SlotRef::Kind::kParam: return "param" + std::to_string(s.index + 1);
  }
  return "this";
}

std::string slot_list(const std::vector<SlotRef>& slots) {
  std::string s;
  for (std::size_t i = 0; i < slots.size(); ++i) s += (i ? ", " : "") + slot_keyword(slots[i]);
  return s;
}

std::vector<SlotRef> plain(std::vector<SlotRef> slots) {
  for (auto& s : slots) s.receiver_kind.reset();
  return slots;
}

// Every variant written back as a plain `method` rule without expansion.
std::string respell(const std::vector<NormalizedQuery>& qs) {
  std::string text;
  for (const auto& q : qs) {
    text += "query \"" + q.id + "\" {\n";
    for (const auto& rule : q.rules) {
      for (const auto& v : rule.variants) {
        text += std::string("  ") + role_keyword(rule.role) + " { method \"" +
                v.variant.signature.to_string() + "\" no-defaults";
        if (!v.in_slots.empty()) text += " in " + slot_list(v.in_slots);
        if (!v.out_slots.empty()) text += " out " + slot_list(v.out_slots);
        text += " }\n";
      }
    }
    text += "}\n";
  }
  return text;
}

// A driver calling every method of `program`; positions in `tainted` get a
// source value, the rest a constant. Line numbers depend only on layout.
std::string driver(const IrProgram& program, const std::vector<std::vector<bool>>& tainted) {
  std::ostringstream out;
  out << "class p.D file \"p/D.kt\" {\n  method \"p.D: void drive()\" static {\n";
  std::size_t m = 0;
  for (const auto& cls : program.classes()) {
    for (const auto& method : cls.methods) {
      const auto& sig = method.signature;
      const std::size_t slots = sig.arity() + 1;
      for (std::size_t i = 0; i < slots; ++i) {
        const std::string local = "x" + std::to_string(m) + "_" + std::to_string(i);
        if (tainted[m][i]) {
          out << "    " << local << " = call \"lib.Src: java.lang.String get()\" ()\n";
        } else {
          out << "    " << local << " = const \"k\"\n";
        }
      }
      const std::string r = "r" + std::to_string(m);
      out << "    " << r << " = call \"" << sig.to_string() << "\"";
      if (!sig.is_static) out << " on x" << m << "_" << sig.arity();
      out << " (";
      for (std::size_t i = 0; i < sig.arity(); ++i) {
        out << (i ? ", " : "") << "x" << m << "_" << i;
      }
      out << ")\n";
      out << "    call \"lib.Snk: void put(java.lang.String)\" (" << r << ")\n";
      for (std::size_t i = 0; i < slots; ++i) {
        out << "    call \"lib.Snk: void put(java.lang.String)\" (x" << m << "_" << i << ")\n";
      }
      ++m;
    }
  }
  out << "  }\n}\n";
  return out.str();
}

std::size_t method_count(const IrProgram& p) {
  std::size_t n = 0;
  for (const auto& c : p.classes()) n += c.methods.size();
  return n;
}

const std::vector<NormalizedQuery>& oracle_queries() {
  static const std::vector<NormalizedQuery> qs = normalize_all(parse_spec(oracle_spec()));
  return qs;
}

}  // namespace

PropertyOutcome prop_slot_maps(std::uint64_t seed, std::size_t cases) {
  Rng r(seed);
  return run_cases("slot-map injectivity", cases, [&](std::size_t) -> std::string {
    const bool ctor = r.coin(3);
    const MethodSignature base = random_signature(r, ctor);
    std::vector<std::pair<SignatureVariant, std::size_t>> expect;  // variant, arity delta
    if (ctor) {
      const auto v = default_variants(base, DefaultsKind::kConstructor);
      expect.emplace_back(v.at(1), 2);
      expect.emplace_back(sealed_ctor_variant(base), 1);
    } else {
      const auto member = default_variants(base, DefaultsKind::kMember);
      if (member.at(1).signature.name != base.name + "$default") return "member default name";
      if (member.at(1).slot_map.at(SlotRef::this_slot()) != SlotRef::param(0)) {
        return "member default does not shift this to param(0)";
      }
      expect.emplace_back(member.at(1), 3);
      expect.emplace_back(default_variants(base, DefaultsKind::kTopLevel).at(1), 2);
      expect.emplace_back(internal_mangle(base, "mod-a"), 0);
    }
    expect.emplace_back(default_variants(base, ctor ? DefaultsKind::kConstructor
                                                    : DefaultsKind::kMember).at(0), 0);
    for (const auto& [v, delta] : expect) {
      if (v.signature.arity() != base.arity() + delta) {
        return std::string(to_string(v.origin)) + " arity delta wrong for " + base.to_string();
      }
      if (auto why = check_slot_map(base, v); !why.empty()) {
        return std::string(to_string(v.origin)) + ": " + why + " for " + base.to_string();
      }
      if (parse_signature(v.signature.to_string(), v.signature.is_static) != v.signature) {
        return "variant does not round trip: " + v.signature.to_string();
      }
    }
    if (identity_slot_map(base.arity()).size() != base.arity() + 2) return "identity map size";
    return {};
  });
}

PropertyOutcome prop_normalization_idempotent(std::uint64_t seed, std::size_t cases) {
  Rng r(seed);
  return run_cases("normalization idempotence", cases, [&](std::size_t) -> std::string {
    const std::string text = random_spec(r);
    const Spec spec = parse_spec(text);
    const auto first = normalize_all(spec);
    const std::string dump = dump_normalized(first);
    if (dump_normalized(normalize_all(parse_spec(text))) != dump) return "not deterministic";
    for (const auto& q : first) {
      for (const auto& rule : q.rules) {
        for (const auto& v : rule.variants) {
          for (const auto* slots : {&v.in_slots, &v.out_slots}) {
            for (const auto& s : *slots) {
              if (s.kind == SlotRef::Kind::kParam && s.index >= v.variant.signature.arity()) {
                return "slot " + s.to_string() + " out of range in " +
                       v.variant.signature.to_string();
              }
            }
          }
        }
      }
    }
    const auto second = normalize_all(parse_spec(respell(first)));
    for (std::size_t qi = 0; qi < first.size(); ++qi) {
      std::size_t k = 0;
      for (const auto& rule : first[qi].rules) {
        for (const auto& v : rule.variants) {
          const auto& again = second.at(qi).rules.at(k++);
          if (again.variants.size() != 1) return "re-normalized rule expanded";
          const auto& w = again.variants[0];
          if (w.variant.signature.to_string() != v.variant.signature.to_string()) {
            return "signature changed: " + v.variant.signature.to_string() + " -> " +
                   w.variant.signature.to_string();
          }
          if (plain(w.in_slots) != plain(v.in_slots) || plain(w.out_slots) != plain(v.out_slots)) {
            return "slots changed for " + v.variant.signature.to_string();
          }
        }
      }
    }
    return {};
  });
}

PropertyOutcome prop_type_round_trip(std::uint64_t seed, std::size_t cases) {
  Rng r(seed);
  return run_cases("type parse/print round trip", cases, [&](std::size_t) -> std::string {
    const std::string text = kotlin_type_text(r, 3);
    const KotlinTypeExpr e = parse_kotlin_type(text);
    const std::string printed = to_string(e);
    const KotlinTypeExpr again = parse_kotlin_type(printed);
    if (!(again == e)) return "print/parse differs: " + text + " -> " + printed;
    if (to_string(again) != printed) return "print not stable: " + printed;
    if (!(parse_kotlin_type(e.raw) == e)) return "raw does not re-parse: " + e.raw;
    if (e.is_function() != (e.base == kFunctionTypeBase)) return "fn_arity/base mismatch: " + text;
    const JvmTypeName jvm = map_type(e);
    if (jvm.name.find('?') != std::string::npos) return "mapped name keeps '?': " + jvm.name;
    if (jvm.name != "Unit" && map_type(parse_kotlin_type(jvm.name)).name != jvm.name) {
      return "mapping not idempotent: " + jvm.name;
    }
    return {};
  });
}

PropertyOutcome prop_signature_round_trip(std::uint64_t seed, std::size_t cases) {
  Rng r(seed);
  return run_cases("signature parse/print round trip", cases, [&](std::size_t) -> std::string {
    const std::string text = signature_text(r);
    const MethodSignature sig = parse_signature(text);
    if (sig.to_string() != text) return "render differs: " + text + " -> " + sig.to_string();
    if (parse_signature(sig.to_string()) != sig) return "re-parse differs: " + text;
    if (sig.is_constructor && (sig.name != kConstructorName || sig.return_type != "void")) {
      return "bad constructor: " + text;
    }
    return {};
  });
}

PropertyOutcome prop_ir_round_trip(std::uint64_t seed, std::size_t cases) {
  Rng r(seed);
  return run_cases("IR parse/print round trip", cases, [&](std::size_t) -> std::string {
    const IrProgram p = parse_ir(random_program(r.engine()));
    const std::string printed = print_ir(p);
    const IrProgram again = parse_ir(printed);
    if (print_ir(again) != printed) return "print not stable";
    if (again.classes().size() != p.classes().size()) return "class count changed";
    for (std::size_t c = 0; c < p.classes().size(); ++c) {
      const auto& a = p.classes()[c];
      const auto& b = again.classes()[c];
      if (a.methods.size() != b.methods.size()) return "method count changed";
      for (std::size_t m = 0; m < a.methods.size(); ++m) {
        if (a.methods[m].signature != b.methods[m].signature) return "signature changed";
        if (a.methods[m].statements != b.methods[m].statements) return "statements changed";
      }
    }
    return {};
  });
}

PropertyOutcome prop_determinism(std::uint64_t seed, std::size_t cases) {
  Rng r(seed);
  return run_cases("determinism", cases, [&](std::size_t) -> std::string {
    const std::string text = random_program(r.engine());
    Options o;
    o.implicit_propagation = r.coin();
    auto once = [&] {
      const auto fs = analyze(parse_ir(text), normalize_all(parse_spec(oracle_spec()), o), o);
      return to_text(fs) + to_sarif(fs, "0", rules_of(oracle_queries()));
    };
    if (once() != once()) return "two runs differ";
    return {};
  });
}

PropertyOutcome prop_summary_monotone(std::uint64_t seed, std::size_t cases) {
  Rng r(seed);
  return run_cases("summary monotonicity", cases, [&](std::size_t) -> std::string {
    const std::string text = random_program(r.engine());
    const IrProgram program = parse_ir(text);
    std::vector<std::vector<bool>> sup;
    for (const auto& c : program.classes()) {
      for (const auto& m : c.methods) {
        std::vector<bool> row(m.signature.arity() + 1);
        for (std::size_t i = 0; i < row.size(); ++i) row[i] = r.coin();
        sup.push_back(row);
      }
    }
    auto sub = sup;
    for (auto& row : sub) {
      for (std::size_t i = 0; i < row.size(); ++i) row[i] = row[i] && r.coin();
    }
    auto findings = [&](const std::vector<std::vector<bool>>& mask) {
      return manifest(analyze(parse_ir(text + driver(program, mask)), oracle_queries()));
    };
    const auto small = findings(sub);
    const auto big = findings(sup);
    if (auto miss = first_missing(small, big); !miss.empty()) {
      return "more entry taint lost " + miss;
    }
    return {};
  });
}

PropertyOutcome prop_ablation_monotone(const std::filesystem::path& fixtures, std::uint64_t seed,
                                       std::size_t random_cases) {
  PropertyOutcome out{"ablation monotonicity", 0, 0, {}};
  auto fail = [&](const std::string& why) {
    if (out.failures++ == 0) out.first_failure = why;
  };
  auto compare = [&](const std::string& label, const IrProgram& program, const Spec& spec,
                     const Options& on, const Options& off) {
    ++out.cases;
    try {
      const auto enabled = manifest(analyze(program, normalize_all(spec, on), on));
      const auto disabled = manifest(analyze(program, normalize_all(spec, off), off));
      if (auto miss = first_missing(disabled, enabled); !miss.empty()) {
        fail(label + ": ablated run found " + miss);
      }
    } catch (const std::exception& e) {
      fail(label + ": " + e.what());
    }
  };
  std::vector<std::filesystem::path> dirs;
  if (std::filesystem::is_directory(fixtures)) {
    for (const auto& e : std::filesystem::directory_iterator(fixtures)) {
      if (std::filesystem::exists(e.path() / "case.spec")) dirs.push_back(e.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  for (const auto& dir : dirs) {
    const CorpusCase c = load_case(dir);
    const Spec spec = parse_spec(read_file(c.spec_path));
    const IrProgram program = load_ir_files(c.ir_paths);
    for (const auto& flag : option_flag_names()) {
      Options on, off;
      // Implicit propagation adds flows; every other flag removes a handling.
      if (flag == "implicit-propagation") {
        set_option_flag(on, flag);
      } else {
        set_option_flag(off, flag);
      }
      compare(c.name + " " + flag, program, spec, on, off);
    }
  }
  Rng r(seed);
  const Spec spec = parse_spec(oracle_spec());
  for (std::size_t i = 0; i < random_cases; ++i) {
    const IrProgram program = parse_ir(random_program(r.engine()));
    Options on, off;
    on.implicit_propagation = true;
    compare("random " + std::to_string(i), program, spec, on, off);
  }
  return out;
}

PropertyOutcome prop_oracle_agrees(std::uint64_t seed, std::size_t cases) {
  Rng r(seed);
  return run_cases("oracle equivalence", cases, [&](std::size_t) -> std::string {
    const std::string text = random_program(r.engine());
    const IrProgram program = parse_ir(text);
    Options o;
    o.implicit_propagation = r.coin(3);
    const auto qs = normalize_all(parse_spec(oracle_spec()), o);
    const auto engine = manifest(analyze(program, qs, o));
    const auto oracle = inline_oracle(program, qs, o, 3);
    if (engine != oracle) {
      std::string why = "engine and oracle differ;";
      if (auto m = first_missing(oracle, engine); !m.empty()) why += " missed " + m;
      if (auto m = first_missing(engine, oracle); !m.empty()) why += " extra " + m;
      return why + "\n" + text;
    }
    return {};
  });
}

std::vector<PropertyOutcome> run_property_suite(const std::filesystem::path& fixtures,
                                                std::uint64_t seed, std::size_t cases) {
  return {prop_slot_maps(seed, cases),
          prop_normalization_idempotent(seed + 1, cases),
          prop_type_round_trip(seed + 2, cases),
          prop_signature_round_trip(seed + 3, cases),
          prop_ir_round_trip(seed + 4, cases),
          prop_determinism(seed + 5, cases),
          prop_summary_monotone(seed + 6, cases),
          prop_ablation_monotone(fixtures, seed + 7, cases)};
}

}  // namespace ktaint::testing
