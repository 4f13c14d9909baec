#pragma once

namespace ktaint {

/// Engine and normalization switches. Everything except
/// `implicit_propagation` turns off one Kotlin-specific handling so its
/// effect can be measured.
struct Options {
  /// Opaque calls with no matching rule taint their result from any
  /// tainted argument.
  bool implicit_propagation = false;

  bool no_default_expansion = false;
  bool no_type_mapping = false;
  bool no_alias_resolution = false;
  bool no_extension_handling = false;
  bool no_property_accessors = false;
  bool no_top_level_classes = false;
  bool no_infix_handling = false;
  bool no_operator_mapping = false;
};

}  // namespace ktaint
