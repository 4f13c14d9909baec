#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ktaint/signature.hpp"

namespace ktaint {

/// A field reference. Instance fields ignore the base object: every
/// `x.f` shares the key `*::f`. Static fields are keyed by class.
struct FieldRef {
  std::optional<std::string> base_local;  // unset for static fields
  std::string class_name;                 // static fields only
  std::string field;

  std::string key() const;
  std::string to_string() const;

  friend bool operator==(const FieldRef&, const FieldRef&) = default;
};

namespace stmt {

struct Identity {
  std::string local;
  SlotRef slot;  // this or param(i)
  friend bool operator==(const Identity&, const Identity&) = default;
};

struct Const {
  std::string local;
  std::string literal;
  friend bool operator==(const Const&, const Const&) = default;
};

struct Copy {
  std::string dst;
  std::string src;
  friend bool operator==(const Copy&, const Copy&) = default;
};

struct Invoke {
  MethodSignature callee;
  std::optional<std::string> receiver;  // unset for static calls
  std::vector<std::string> args;
  std::optional<std::string> result;
  friend bool operator==(const Invoke&, const Invoke&) = default;
};

struct FieldStore {
  FieldRef field;
  std::string src;
  friend bool operator==(const FieldStore&, const FieldStore&) = default;
};

struct FieldLoad {
  std::string dst;
  FieldRef field;
  friend bool operator==(const FieldLoad&, const FieldLoad&) = default;
};

struct Return {
  std::optional<std::string> local;
  friend bool operator==(const Return&, const Return&) = default;
};

}  // namespace stmt

struct IrStatement {
  std::variant<stmt::Identity, stmt::Const, stmt::Copy, stmt::Invoke,
               stmt::FieldStore, stmt::FieldLoad, stmt::Return>
      op;
  std::size_t line = 0;

  friend bool operator==(const IrStatement&, const IrStatement&) = default;
};

struct IrMethod {
  MethodSignature signature;
  std::vector<IrStatement> statements;
  std::size_t line = 0;
};

struct IrClass {
  std::string name;
  std::optional<std::string> source_file;
  std::optional<std::string> super_name;
  std::vector<IrMethod> methods;
  std::string ir_file;  // label of the IR file the class came from
  std::size_t line = 0;

  /// Report location: the declared source file, else `a/b/C.class`.
  std::string report_uri() const;
};

/// An immutable program: classes plus an index from canonical signature
/// text to method.
class IrProgram {
 public:
  struct MethodRef {
    const IrClass* cls = nullptr;
    const IrMethod* method = nullptr;
  };

  IrProgram() = default;
  explicit IrProgram(std::vector<IrClass> classes);

  IrProgram(const IrProgram& other) : IrProgram(other.classes_) {}
  IrProgram& operator=(const IrProgram& other) {
    if (this != &other) *this = IrProgram(other.classes_);
    return *this;
  }
  IrProgram(IrProgram&&) = default;
  IrProgram& operator=(IrProgram&&) = default;

  const std::vector<IrClass>& classes() const { return classes_; }
  std::optional<MethodRef> find(std::string_view signature_text) const;
  bool has_class(std::string_view name) const;
  /// All methods, in class then declaration order.
  std::vector<MethodRef> methods() const;

  /// Combines programs; throws ParseError on a duplicate signature.
  static IrProgram merge(std::vector<IrProgram> parts);

 private:
  std::vector<IrClass> classes_;
  std::map<std::string, MethodRef, std::less<>> index_;
};

/// Parses IR text. Statement lines are the physical lines of `text` unless a
/// `line N` suffix overrides them. Throws ParseError.
IrProgram parse_ir(std::string_view text, std::string_view file_label = "");

/// Renders a program so that parse_ir reproduces it, lines included.
std::string print_ir(const IrProgram& program);

struct Diagnostic {
  enum class Severity { kError, kWarning, kNote };
  Severity severity = Severity::kNote;
  std::string file;
  std::size_t line = 0;
  std::string message;

  std::string to_string() const;
};

/// Use-before-def locals, duplicate identities, out-of-range parameters,
/// and notes for calls into program classes that lack the called method.
std::vector<Diagnostic> validate(const IrProgram& program);

}  // namespace ktaint
