#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ktaint {

/// Base name used for function types such as `(Int, Int) -> Int`.
inline constexpr std::string_view kFunctionTypeBase = "->";

/// A Kotlin source-level type as a user writes it in a signature.
///
/// Function types keep their parameter types followed by the return type in
/// `type_args`; `fn_arity` holds the parameter count and is set only for them.
struct KotlinTypeExpr {
  std::string raw;
  std::string base;
  bool nullable = false;
  std::vector<KotlinTypeExpr> type_args;
  std::optional<std::size_t> fn_arity;

  bool is_function() const { return fn_arity.has_value(); }
  /// `_` or `*`.
  bool is_wildcard() const;
  /// A single upper-case letter such as `T`.
  bool is_type_variable() const;

  /// Structural equality; `raw` is not compared.
  friend bool operator==(const KotlinTypeExpr& a, const KotlinTypeExpr& b);
};

/// Parses a Kotlin type. Also accepts bytecode-level spellings (`int[]`,
/// `java.util.Map<K, V>`) so mapped output can be fed back in.
/// Throws ParseError (column is 1-based) on malformed input.
KotlinTypeExpr parse_kotlin_type(std::string_view text);

/// Canonical Kotlin rendering; `parse_kotlin_type(to_string(e)) == e`.
std::string to_string(const KotlinTypeExpr& expr);

/// A bytecode-level type name (`int`, `java.lang.Integer`, `byte[]`, ...).
struct JvmTypeName {
  std::string name;

  friend bool operator==(const JvmTypeName&, const JvmTypeName&) = default;
};

/// Alias name -> canonical Kotlin type text. Kept cycle-free on insertion.
class TypeAliasTable {
 public:
  TypeAliasTable() = default;

  /// Throws SpecError if the entry would introduce a cycle or the canonical
  /// text does not parse.
  void add(const std::string& alias, const std::string& canonical);

  const std::string* find(std::string_view alias) const;
  const std::map<std::string, std::string, std::less<>>& entries() const {
    return entries_;
  }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

/// Replaces every alias occurrence, including inside type arguments.
KotlinTypeExpr resolve_alias(const TypeAliasTable& table,
                             const KotlinTypeExpr& expr);

/// Maps an alias-resolved Kotlin type to its bytecode-level name.
JvmTypeName map_type(const KotlinTypeExpr& expr);

/// True for type texts that match any single type: `_`, `*` or a type
/// variable such as `T`.
bool is_wildcard_type_text(std::string_view text);

}  // namespace ktaint
