#include "ktaint/kotlin_types.hpp"

#include <cctype>
#include <set>
#include <unordered_map>

#include "ktaint/error.hpp"

namespace ktaint {

namespace {

constexpr std::size_t kMaxFixedFunctionArity = 22;

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' ||
         c == '.';
}

class TypeParser {
 public:
  explicit TypeParser(std::string_view text) : text_(text) {}

  KotlinTypeExpr parse_all() {
    skip_ws();
    if (at_end()) fail("empty type");
    KotlinTypeExpr expr = parse_type(/*inside_function=*/false);
    skip_ws();
    if (!at_end()) fail("unexpected '" + std::string(1, peek()) + "'");
    return expr;
  }

 private:
  KotlinTypeExpr parse_type(bool inside_function) {
    skip_ws();
    const std::size_t start = pos_;
    KotlinTypeExpr expr;
    if (peek() == '(') {
      if (is_function_type_ahead()) {
        if (inside_function) {
          fail("nested function types are not supported; use a wildcard "
               "form such as (_) -> _");
        }
        expr = parse_function_type();
      } else {
        ++pos_;
        expr = parse_type(inside_function);
        skip_ws();
        expect(')');
        skip_ws();
        if (peek() == '?') {
          ++pos_;
          expr.nullable = true;
        }
      }
    } else {
      expr = parse_simple();
    }
    expr.raw = trim(text_.substr(start, pos_ - start));
    return expr;
  }

  KotlinTypeExpr parse_function_type() {
    expect('(');
    KotlinTypeExpr expr;
    expr.base = std::string(kFunctionTypeBase);
    skip_ws();
    if (peek() != ')') {
      for (;;) {
        expr.type_args.push_back(parse_type(/*inside_function=*/true));
        skip_ws();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        break;
      }
    }
    expect(')');
    skip_ws();
    expect('-');
    expect('>');
    expr.fn_arity = expr.type_args.size();
    expr.type_args.push_back(parse_type(/*inside_function=*/true));
    return expr;
  }

  KotlinTypeExpr parse_simple() {
    KotlinTypeExpr expr;
    const std::size_t start = pos_;
    if (peek() == '*') {
      ++pos_;
    } else {
      while (!at_end() && is_name_char(peek())) ++pos_;
    }
    if (pos_ == start) {
      if (at_end()) fail("expected a type name");
      fail("expected a type name, found '" + std::string(1, peek()) + "'");
    }
    expr.base = std::string(text_.substr(start, pos_ - start));
    if (expr.base.front() == '.' || expr.base.back() == '.' ||
        expr.base.find("..") != std::string::npos) {
      pos_ = start;
      fail("malformed qualified name '" + expr.base + "'");
    }
    skip_ws();
    if (peek() == '<') {
      ++pos_;
      for (;;) {
        expr.type_args.push_back(parse_type(/*inside_function=*/false));
        skip_ws();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        break;
      }
      expect('>');
    }
    skip_ws();
    while (peek() == '[') {
      ++pos_;
      expect(']');
      expr.base += "[]";
      skip_ws();
    }
    if (peek() == '?') {
      ++pos_;
      expr.nullable = true;
    }
    return expr;
  }

  // At '(' : a function type iff the matching ')' is followed by "->".
  bool is_function_type_ahead() const {
    int depth = 0;
    for (std::size_t i = pos_; i < text_.size(); ++i) {
      if (text_[i] == '(') {
        ++depth;
      } else if (text_[i] == ')') {
        if (--depth == 0) {
          std::size_t j = i + 1;
          while (j < text_.size() && text_[j] == ' ') ++j;
          return text_.substr(j, 2) == "->";
        }
      }
    }
    return false;
  }

  void expect(char c) {
    skip_ws();
    if (at_end()) fail(std::string("expected '") + c + "' at end of input");
    if (peek() != c) {
      fail(std::string("expected '") + c + "', found '" + peek() + "'");
    }
    ++pos_;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) {
      ++pos_;
    }
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message + " in type '" + std::string(text_) + "'", 0,
                     pos_ + 1);
  }

  static std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
      s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
      s.remove_suffix(1);
    return std::string(s);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

struct BasicRow {
  const char* primitive;
  const char* boxed;
};

const std::unordered_map<std::string_view, BasicRow>& basic_types() {
  static const std::unordered_map<std::string_view, BasicRow> rows = {
      {"Byte", {"byte", "java.lang.Byte"}},
      {"Short", {"short", "java.lang.Short"}},
      {"Int", {"int", "java.lang.Integer"}},
      {"Long", {"long", "java.lang.Long"}},
      {"Char", {"char", "java.lang.Character"}},
      {"Float", {"float", "java.lang.Float"}},
      {"Double", {"double", "java.lang.Double"}},
      {"Boolean", {"boolean", "java.lang.Boolean"}},
  };
  return rows;
}

// Reference types whose name is the same with or without `?`.
const std::unordered_map<std::string_view, std::string_view>&
reference_types() {
  static const std::unordered_map<std::string_view, std::string_view> rows = {
      {"Any", "java.lang.Object"},
      {"Cloneable", "java.lang.Cloneable"},
      {"Comparable", "java.lang.Comparable"},
      {"Enum", "java.lang.Enum"},
      {"Annotation", "java.lang.Annotation"},
      {"CharSequence", "java.lang.CharSequence"},
      {"String", "java.lang.String"},
      {"Number", "java.lang.Number"},
      {"Throwable", "java.lang.Throwable"},
      {"ByteArray", "byte[]"},
      {"ShortArray", "short[]"},
      {"IntArray", "int[]"},
      {"LongArray", "long[]"},
      {"CharArray", "char[]"},
      {"FloatArray", "float[]"},
      {"DoubleArray", "double[]"},
      {"BooleanArray", "boolean[]"},
      {"Collection", "java.util.Collection"},
      {"List", "java.util.List"},
      {"Set", "java.util.Set"},
      {"Map", "java.util.Map"},
      {"Map.Entry", "java.util.Map.Entry"},
      {"Iterator", "java.util.Iterator"},
      {"Iterable", "java.lang.Iterable"},
      {"ListIterator", "java.util.ListIterator"},
      {"MutableCollection", "java.util.Collection"},
      {"MutableList", "java.util.List"},
      {"MutableSet", "java.util.Set"},
      {"MutableMap", "java.util.Map"},
      {"MutableMap.Entry", "java.util.Map.Entry"},
      {"MutableIterator", "java.util.Iterator"},
      {"MutableIterable", "java.lang.Iterable"},
      {"MutableListIterator", "java.util.ListIterator"},
  };
  return rows;
}

bool is_table_name(std::string_view name) {
  return basic_types().contains(name) || reference_types().contains(name) ||
         name == "Unit" || name == "Nothing" || name == "Array";
}

// `kotlin.Int` and `kotlin.collections.List` resolve to their short rows.
std::string_view strip_kotlin_package(std::string_view base) {
  for (std::string_view prefix : {"kotlin.collections.", "kotlin."}) {
    if (base.starts_with(prefix)) {
      std::string_view rest = base.substr(prefix.size());
      if (is_table_name(rest)) return rest;
    }
  }
  return base;
}

std::string render_args(const std::vector<KotlinTypeExpr>& args,
                        std::string (*render)(const KotlinTypeExpr&)) {
  std::string out = "<";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) out += ", ";
    out += render(args[i]);
  }
  out += ">";
  return out;
}

// Type arguments and array elements are always reference types.
std::string map_boxed(const KotlinTypeExpr& expr) {
  KotlinTypeExpr boxed = expr;
  boxed.nullable = true;
  return map_type(boxed).name;
}

bool type_graph_has_cycle(
    const std::map<std::string, std::string, std::less<>>& entries);

}  // namespace

bool KotlinTypeExpr::is_wildcard() const {
  return !is_function() && (base == "_" || base == "*");
}

bool KotlinTypeExpr::is_type_variable() const {
  return !is_function() && type_args.empty() && base.size() == 1 &&
         std::isupper(static_cast<unsigned char>(base[0]));
}

bool operator==(const KotlinTypeExpr& a, const KotlinTypeExpr& b) {
  return a.base == b.base && a.nullable == b.nullable &&
         a.fn_arity == b.fn_arity && a.type_args == b.type_args;
}

KotlinTypeExpr parse_kotlin_type(std::string_view text) {
  return TypeParser(text).parse_all();
}

std::string to_string(const KotlinTypeExpr& expr) {
  if (expr.is_function()) {
    std::string out = "(";
    const std::size_t arity = *expr.fn_arity;
    for (std::size_t i = 0; i < arity; ++i) {
      if (i > 0) out += ", ";
      out += to_string(expr.type_args[i]);
    }
    out += ") -> ";
    out += to_string(expr.type_args.back());
    if (expr.nullable) return "(" + out + ")?";
    return out;
  }
  std::string out;
  // Array suffixes follow the type arguments.
  std::string_view base = expr.base;
  std::size_t dims = 0;
  while (base.ends_with("[]")) {
    base.remove_suffix(2);
    ++dims;
  }
  out += base;
  if (!expr.type_args.empty()) out += render_args(expr.type_args, &to_string);
  for (std::size_t i = 0; i < dims; ++i) out += "[]";
  if (expr.nullable) out += "?";
  return out;
}

void TypeAliasTable::add(const std::string& alias,
                         const std::string& canonical) {
  try {
    (void)parse_kotlin_type(canonical);
  } catch (const ParseError& e) {
    throw SpecError("alias '" + alias + "': " + e.what());
  }
  auto previous = entries_.find(alias);
  std::optional<std::string> old;
  if (previous != entries_.end()) old = previous->second;
  entries_[alias] = canonical;
  if (type_graph_has_cycle(entries_)) {
    if (old) {
      entries_[alias] = *old;
    } else {
      entries_.erase(alias);
    }
    throw SpecError("type alias '" + alias + "' is cyclic");
  }
}

const std::string* TypeAliasTable::find(std::string_view alias) const {
  auto it = entries_.find(alias);
  return it == entries_.end() ? nullptr : &it->second;
}

namespace {

void collect_names(const KotlinTypeExpr& expr, std::set<std::string>& out) {
  if (!expr.is_function()) out.insert(expr.base);
  for (const auto& arg : expr.type_args) collect_names(arg, out);
}

bool type_graph_has_cycle(
    const std::map<std::string, std::string, std::less<>>& entries) {
  std::map<std::string, std::set<std::string>, std::less<>> edges;
  for (const auto& [alias, canonical] : entries) {
    collect_names(parse_kotlin_type(canonical), edges[alias]);
  }
  enum class Mark { kNone, kActive, kDone };
  std::map<std::string, Mark, std::less<>> marks;
  auto visit = [&](auto& self, const std::string& node) -> bool {
    Mark& mark = marks[node];
    if (mark == Mark::kActive) return true;
    if (mark == Mark::kDone) return false;
    mark = Mark::kActive;
    auto it = edges.find(node);
    if (it != edges.end()) {
      for (const auto& next : it->second) {
        if (entries.contains(next) && self(self, next)) return true;
      }
    }
    marks[node] = Mark::kDone;
    return false;
  };
  for (const auto& [alias, _] : entries) {
    if (visit(visit, alias)) return true;
  }
  return false;
}

}  // namespace

KotlinTypeExpr resolve_alias(const TypeAliasTable& table,
                             const KotlinTypeExpr& expr) {
  KotlinTypeExpr out = expr;
  for (auto& arg : out.type_args) arg = resolve_alias(table, arg);
  if (out.is_function()) {
    out.raw = to_string(out);
    return out;
  }
  if (const std::string* canonical = table.find(out.base)) {
    KotlinTypeExpr replacement =
        resolve_alias(table, parse_kotlin_type(*canonical));
    replacement.nullable = replacement.nullable || out.nullable;
    if (replacement.type_args.empty() && !replacement.is_function()) {
      replacement.type_args = std::move(out.type_args);
    }
    out = std::move(replacement);
  }
  out.raw = to_string(out);
  return out;
}

JvmTypeName map_type(const KotlinTypeExpr& expr) {
  if (expr.is_function()) {
    const std::size_t arity = *expr.fn_arity;
    if (arity > kMaxFixedFunctionArity) {
      return {"kotlin.jvm.functions.FunctionN"};
    }
    return {"kotlin.jvm.functions.Function" + std::to_string(arity)};
  }
  const std::string_view base = strip_kotlin_package(expr.base);

  if (base == "Nothing") return {"java.lang.Void"};
  if (base == "Unit") return {expr.nullable ? "Unit" : "void"};

  if (auto it = basic_types().find(base); it != basic_types().end()) {
    return {expr.nullable ? it->second.boxed : it->second.primitive};
  }
  if (base == "Array" && expr.type_args.size() == 1) {
    return {map_boxed(expr.type_args.front()) + "[]"};
  }

  std::string name;
  if (auto it = reference_types().find(base); it != reference_types().end()) {
    name = it->second;
  } else {
    // Unknown, bytecode-level, wildcard, or type variable: pass through.
    name = expr.base;
  }
  if (!expr.type_args.empty()) {
    std::string_view stem = name;
    std::size_t dims = 0;
    while (stem.ends_with("[]")) {
      stem.remove_suffix(2);
      ++dims;
    }
    std::string rendered(stem);
    rendered += render_args(expr.type_args, &map_boxed);
    for (std::size_t i = 0; i < dims; ++i) rendered += "[]";
    name = std::move(rendered);
  }
  return {std::move(name)};
}

bool is_wildcard_type_text(std::string_view text) {
  if (text == "_" || text == "*") return true;
  return text.size() == 1 && std::isupper(static_cast<unsigned char>(text[0]));
}

}  // namespace ktaint
