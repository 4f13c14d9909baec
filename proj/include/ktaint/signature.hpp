#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ktaint {

/// Bytecode-level method identity.
///
/// Canonical text: `<class>: <return> <name>(<p1>,<p2>,...)`. Parameter
/// types are separated by a bare comma; a comma inside `<...>` belongs to
/// the type (`java.util.Map<K, V>`).
struct MethodSignature {
  std::string declaring_class;
  std::string return_type;
  std::string name;
  std::vector<std::string> params;
  bool is_static = false;
  bool is_constructor = false;

  std::size_t arity() const { return params.size(); }
  std::string to_string() const;

  friend bool operator==(const MethodSignature&,
                         const MethodSignature&) = default;
};

inline constexpr std::string_view kConstructorName = "<init>";

/// Parses canonical signature text. Whitespace around separators is
/// tolerated; `is_constructor` follows from the name. Throws ParseError.
MethodSignature parse_signature(std::string_view text, bool is_static = false);

/// Splits `a,b<c, d>,e` at top-level commas and trims each part.
std::vector<std::string> split_type_list(std::string_view text);

/// Type matching for rule patterns: a wildcard (`_`, `*`, a type variable)
/// matches any single type, `*[]` any array, and type arguments are compared
/// pointwise.
bool type_text_matches(std::string_view pattern, std::string_view actual);

/// Same class, name and arity; return and parameter types per
/// type_text_matches.
bool signature_matches(const MethodSignature& pattern,
                       const MethodSignature& actual);

enum class ReceiverKind { kDispatch, kExtension };

/// A taint position at a call or method boundary.
struct SlotRef {
  enum class Kind { kThis, kParam, kReturn };

  Kind kind = Kind::kThis;
  std::size_t index = 0;  // meaningful for kParam only
  std::optional<ReceiverKind> receiver_kind;

  static SlotRef this_slot() { return {Kind::kThis, 0, std::nullopt}; }
  static SlotRef param(std::size_t i) { return {Kind::kParam, i, std::nullopt}; }
  static SlotRef ret() { return {Kind::kReturn, 0, std::nullopt}; }

  /// `this`, `this[dispatch]`, `param(2)`, `return`.
  std::string to_string() const;

  friend auto operator<=>(const SlotRef&, const SlotRef&) = default;
  friend bool operator==(const SlotRef&, const SlotRef&) = default;
};

enum class VariantOrigin { kBase, kDefaultArgs, kSealedCtor, kInternalMangled };

std::string_view to_string(VariantOrigin origin);

/// One compiler-visible form of a rule's method and how its slots relate to
/// the base form.
struct SignatureVariant {
  MethodSignature signature;
  std::map<SlotRef, SlotRef> slot_map;
  VariantOrigin origin = VariantOrigin::kBase;

  /// Maps a base slot; slots outside the map are returned unchanged.
  SlotRef remap(const SlotRef& slot) const;
};

/// Identity slot map over `this`, `param(0..arity-1)` and `return`.
std::map<SlotRef, SlotRef> identity_slot_map(std::size_t arity);

}  // namespace ktaint
