#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ktaint/kotlin_types.hpp"
#include "ktaint/signature.hpp"

namespace ktaint {

/// Renders a Kotlin type into signature text. Defaults to map_type; the
/// type-mapping ablation swaps in the plain Kotlin spelling.
using TypeRenderer = std::function<std::string(const KotlinTypeExpr&)>;

TypeRenderer mapping_renderer();

enum class AccessorWant { kGetter, kSetter, kBoth };

/// `get<Name>()` / `set<Name>(T)`; only the first letter is upper-cased.
std::vector<MethodSignature> property_accessors(
    const std::string& class_name, const std::string& prop_name,
    const KotlinTypeExpr& prop_type, AccessorWant want,
    const TypeRenderer& render = mapping_renderer());

/// Class holding a file's top-level members: `<package>.<File>Kt`.
std::string top_level_class(std::string_view package_name,
                            std::string_view file_name);

/// Receiver injected as the first parameter.
MethodSignature extension_signature(
    const std::string& container, const KotlinTypeExpr& receiver,
    const std::string& name, const std::vector<KotlinTypeExpr>& params,
    const KotlinTypeExpr& ret, const TypeRenderer& render = mapping_renderer());

/// Getter of an extension property declared in `container`.
MethodSignature extension_property_getter(
    const std::string& container, const KotlinTypeExpr& receiver,
    const std::string& prop_name, const KotlinTypeExpr& prop_type,
    const TypeRenderer& render = mapping_renderer());

/// `<class>$<companion name or "Companion">`.
std::string companion_wrapper(const std::string& class_name,
                              const std::optional<std::string>& companion_name);

/// Throws SpecError unless exactly one parameter is given.
MethodSignature infix_signature(const KotlinTypeExpr& receiver,
                                const std::string& name,
                                const std::vector<KotlinTypeExpr>& params,
                                const KotlinTypeExpr& ret,
                                const TypeRenderer& render = mapping_renderer());

/// Function a built-in operator symbol compiles to. `+` and `-` resolve to
/// the unary or binary form by operand count. Throws SpecError for unknown
/// symbols (the message lists the supported ones) or a bad operand count.
std::string operator_function_name(std::string_view symbol,
                                   std::size_t operand_count);

/// All symbols accepted by operator_function_name.
const std::vector<std::string>& supported_operator_symbols();

MethodSignature operator_signature(
    std::string_view symbol, const KotlinTypeExpr& receiver,
    const std::vector<KotlinTypeExpr>& operand_types, const KotlinTypeExpr& ret,
    const TypeRenderer& render = mapping_renderer());

enum class DefaultsKind { kConstructor, kTopLevel, kMember };

/// The base signature plus its compiler-generated default-argument form.
std::vector<SignatureVariant> default_variants(const MethodSignature& sig,
                                               DefaultsKind kind);

/// Sealed-class constructor overload with a trailing marker parameter.
/// Throws SpecError for non-constructors.
SignatureVariant sealed_ctor_variant(const MethodSignature& sig);

/// `<name>-<module>` with `-` in the module name replaced by `_`.
/// `warning` receives a note when the module name is empty.
SignatureVariant internal_mangle(const MethodSignature& sig,
                                 std::string_view module_name,
                                 std::string* warning = nullptr);

enum class SyntheticNameKind {
  kDefaultVariant,
  kCompanionWrapper,
  kCompanionAccessBridge,
  kLocalFunction,
  kLambdaWrapper,
  kInlineImpl,
  kInlineBox,
  kInlineUnbox,
  kInternalMangled,
  kPlain,
};

std::string_view to_string(SyntheticNameKind kind);

/// Diagnostic classification of compiler-generated method and class names.
SyntheticNameKind classify_generated_name(std::string_view name);

}  // namespace ktaint
