#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ktaint/kotlin_types.hpp"
#include "ktaint/options.hpp"
#include "ktaint/sig_synth.hpp"
#include "ktaint/signature.hpp"

namespace ktaint {

enum class Role { kSource, kSink, kSanitizer, kPropagator };

std::string_view to_string(Role role);

/// A signature written with Kotlin types; `declaring_class` is empty for
/// top-level members, whose class is synthesized.
struct SourceSignature {
  std::string declaring_class;
  KotlinTypeExpr return_type;
  std::string name;
  std::vector<KotlinTypeExpr> params;
};

namespace descriptor {

struct Method {
  SourceSignature signature;
};

struct Property {
  AccessorWant accessor = AccessorWant::kGetter;
  std::string class_name;
  std::string name;
  KotlinTypeExpr type;
};

struct TopLevel {
  std::string package_name;
  std::string file_name;
  SourceSignature signature;
};

struct ExtensionFunction {
  std::string container;
  KotlinTypeExpr receiver;
  std::string name;
  std::vector<KotlinTypeExpr> params;
  KotlinTypeExpr return_type;
};

struct ExtensionProperty {
  std::string container;
  KotlinTypeExpr receiver;
  std::string name;
  KotlinTypeExpr type;
  bool setter_requested = false;
};

struct CompanionExtension {
  std::string class_name;
  std::optional<std::string> companion_name;
  std::string container;
  std::string name;
  std::vector<KotlinTypeExpr> params;
  KotlinTypeExpr return_type;
};

struct Infix {
  KotlinTypeExpr receiver;
  std::string name;
  std::vector<KotlinTypeExpr> params;
  KotlinTypeExpr return_type;
};

struct Operator {
  std::string symbol;
  KotlinTypeExpr receiver;
  std::vector<KotlinTypeExpr> operands;
  KotlinTypeExpr return_type;
};

}  // namespace descriptor

using Descriptor =
    std::variant<descriptor::Method, descriptor::Property, descriptor::TopLevel,
                 descriptor::ExtensionFunction, descriptor::ExtensionProperty,
                 descriptor::CompanionExtension, descriptor::Infix,
                 descriptor::Operator>;

/// Extension forms put the receiver in parameter 0 of the bytecode method.
bool is_extension(const Descriptor& d);

struct RuleAttributes {
  std::optional<DefaultsKind> defaults;
  bool no_defaults = false;
  bool sealed = false;
  std::optional<std::string> internal_module;
};

/// One method a query cares about, in source-level terms. Slot indices are
/// 0-based here (the surface syntax is 1-based).
struct MethodRule {
  Descriptor descriptor;
  RuleAttributes attributes;
  std::vector<SlotRef> in_slots;
  std::vector<SlotRef> out_slots;
  std::size_t line = 0;
};

struct TaintQuery {
  std::string id;
  std::string message;
  std::vector<MethodRule> sources;
  std::vector<MethodRule> sinks;
  std::vector<MethodRule> sanitizers;
  std::vector<MethodRule> propagators;
  std::size_t line = 0;

  const std::vector<MethodRule>& rules(Role role) const;
};

struct Spec {
  TypeAliasTable aliases;
  std::vector<TaintQuery> queries;
};

/// Parses a spec file. Throws ParseError with line/column for syntax
/// errors, duplicate query ids and queries lacking a source or sink.
Spec parse_spec(std::string_view text);

/// Parses a file holding only an `aliases { ... }` block.
TypeAliasTable parse_alias_file(std::string_view text);

/// A variant with the rule's slots expressed in its own parameter numbering.
struct NormalizedVariant {
  SignatureVariant variant;
  std::vector<SlotRef> in_slots;
  std::vector<SlotRef> out_slots;
};

struct NormalizedRule {
  Role role = Role::kSource;
  std::size_t index = 0;  // position within the query's list for `role`
  std::size_t line = 0;
  std::vector<NormalizedVariant> variants;  // base variant first
  std::vector<std::string> warnings;
};

struct NormalizedQuery {
  std::string id;
  std::string message;
  std::vector<NormalizedRule> rules;  // sources, sinks, sanitizers, propagators
};

/// Lowers every rule to bytecode-level variants. Throws SpecError for
/// requests that cannot be honored (setter on an extension property, infix
/// arity, unknown operator, slot out of range, ...).
NormalizedQuery normalize(const TaintQuery& query, const TypeAliasTable& aliases,
                          const Options& options = {});

std::vector<NormalizedQuery> normalize_all(const Spec& spec,
                                           const Options& options = {});

/// Stable text rendering of normalized queries, sorted by query id.
std::string dump_normalized(const std::vector<NormalizedQuery>& queries);

}  // namespace ktaint
