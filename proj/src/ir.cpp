#include "ktaint/ir.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "ktaint/error.hpp"

namespace ktaint {

namespace {

struct Tok {
  enum class Kind { kIdent, kString, kInt, kPunct, kNewline, kEnd };
  Kind kind = Kind::kEnd;
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' ||
         c == '.' || c == '-';
}

std::vector<Tok> lex(std::string_view text) {
  std::vector<Tok> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      out.push_back({Tok::Kind::kNewline, "\n", line, col});
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      ++col;
      continue;
    }
    if (c == ';') {
      while (i < text.size() && text[i] != '\n') {
        ++i;
        ++col;
      }
      continue;
    }
    Tok t;
    t.line = line;
    t.column = col;
    if (c == '"') {
      t.kind = Tok::Kind::kString;
      ++i;
      ++col;
      bool closed = false;
      while (i < text.size() && text[i] != '\n') {
        if (text[i] == '"') {
          closed = true;
          ++i;
          ++col;
          break;
        }
        if (text[i] == '\\' && i + 1 < text.size() && text[i + 1] != '\n') {
          t.text += text[i + 1];
          i += 2;
          col += 2;
          continue;
        }
        t.text += text[i];
        ++i;
        ++col;
      }
      if (!closed) throw ParseError("unterminated string", t.line, t.column);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Tok::Kind::kInt;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        t.text += text[i];
        ++i;
        ++col;
      }
    } else if (ident_start(c)) {
      t.kind = Tok::Kind::kIdent;
      while (i < text.size() && ident_char(text[i])) {
        t.text += text[i];
        ++i;
        ++col;
      }
    } else if (std::string_view("{}(),=").find(c) != std::string_view::npos) {
      t.kind = Tok::Kind::kPunct;
      t.text = std::string(1, c);
      ++i;
      ++col;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back(std::move(t));
  }
  out.push_back({Tok::Kind::kEnd, "", line, col});
  return out;
}

bool is_local_name(std::string_view s) {
  return !s.empty() && ident_start(s[0]) && s.find('.') == std::string_view::npos &&
         s.find('-') == std::string_view::npos && s != "this";
}

FieldRef make_field_ref(const Tok& tok) {
  const std::size_t dot = tok.text.rfind('.');
  FieldRef ref;
  ref.field = tok.text.substr(dot + 1);
  const std::string base = tok.text.substr(0, dot);
  if (ref.field.empty() || base.empty()) {
    throw ParseError("malformed field reference '" + tok.text + "'", tok.line,
                     tok.column);
  }
  if (base.find('.') == std::string::npos) {
    ref.base_local = base;
  } else {
    ref.class_name = base;
  }
  return ref;
}

class IrParser {
 public:
  IrParser(std::string_view text, std::string_view label)
      : toks_(lex(text)), label_(label) {}

  IrProgram parse() {
    std::vector<IrClass> classes;
    skip_newlines();
    while (!at(Tok::Kind::kEnd)) {
      classes.push_back(parse_class());
      skip_newlines();
    }
    return IrProgram(std::move(classes));
  }

 private:
  IrClass parse_class() {
    const Tok& kw = expect_ident("class");
    IrClass cls;
    cls.line = kw.line;
    cls.ir_file = label_;
    cls.name = expect(Tok::Kind::kIdent, "class name").text;
    if (is_ident("file")) {
      next();
      cls.source_file = expect(Tok::Kind::kString, "file path").text;
    }
    if (is_ident("extends")) {
      next();
      cls.super_name = expect(Tok::Kind::kIdent, "super class name").text;
    }
    skip_newlines();
    expect_punct("{");
    end_of_line();
    std::set<std::string> seen;
    for (;;) {
      skip_newlines();
      if (is_punct("}")) break;
      IrMethod m = parse_method(cls.name);
      if (!seen.insert(m.signature.to_string()).second) {
        throw ParseError("duplicate method '" + m.signature.to_string() + "'",
                         m.line, 1);
      }
      cls.methods.push_back(std::move(m));
    }
    expect_punct("}");
    end_of_line();
    return cls;
  }

  IrMethod parse_method(const std::string& class_name) {
    const Tok& kw = expect_ident("method");
    IrMethod m;
    m.line = kw.line;
    const Tok& sig_tok = expect(Tok::Kind::kString, "method signature");
    bool is_static = false;
    if (is_ident("static")) {
      next();
      is_static = true;
    }
    m.signature = signature_at(sig_tok, is_static);
    if (m.signature.declaring_class != class_name) {
      fail(sig_tok, "method class '" + m.signature.declaring_class +
                        "' differs from enclosing class '" + class_name + "'");
    }
    skip_newlines();
    expect_punct("{");
    end_of_line();
    for (;;) {
      skip_newlines();
      if (is_punct("}")) break;
      m.statements.push_back(parse_statement());
    }
    expect_punct("}");
    end_of_line();
    return m;
  }

  IrStatement parse_statement() {
    IrStatement st;
    const Tok& first = peek();
    st.line = first.line;
    if (is_ident("return")) {
      next();
      stmt::Return r;
      if (at(Tok::Kind::kIdent) && peek().text != "line") {
        r.local = local_at(next());
      }
      st.op = r;
    } else if (is_ident("call")) {
      st.op = parse_call(std::nullopt);
    } else {
      const Tok& lhs = expect(Tok::Kind::kIdent, "statement");
      expect_punct("=");
      if (lhs.text.find('.') != std::string::npos) {
        stmt::FieldStore fs;
        fs.field = make_field_ref(lhs);
        fs.src = local_at(expect(Tok::Kind::kIdent, "source local"));
        st.op = fs;
      } else {
        const std::string dst = local_at(lhs);
        if (is_ident("param")) {
          next();
          const Tok& n = expect(Tok::Kind::kInt, "parameter index");
          st.op = stmt::Identity{dst, SlotRef::param(std::stoul(n.text))};
        } else if (is_ident("this")) {
          next();
          st.op = stmt::Identity{dst, SlotRef::this_slot()};
        } else if (is_ident("const")) {
          next();
          st.op = stmt::Const{dst, expect(Tok::Kind::kString, "literal").text};
        } else if (is_ident("call")) {
          st.op = parse_call(dst);
        } else {
          const Tok& rhs = expect(Tok::Kind::kIdent, "right-hand side");
          if (rhs.text.find('.') != std::string::npos) {
            st.op = stmt::FieldLoad{dst, make_field_ref(rhs)};
          } else {
            st.op = stmt::Copy{dst, local_at(rhs)};
          }
        }
      }
    }
    if (is_ident("line")) {
      next();
      const Tok& n = expect(Tok::Kind::kInt, "line number");
      st.line = std::stoul(n.text);
      if (st.line == 0) fail(n, "line numbers are positive");
    }
    end_of_line();
    return st;
  }

  stmt::Invoke parse_call(std::optional<std::string> result) {
    expect_ident("call");
    stmt::Invoke inv;
    inv.result = std::move(result);
    const Tok& sig_tok = expect(Tok::Kind::kString, "callee signature");
    inv.callee = signature_at(sig_tok, false);
    if (is_ident("on")) {
      next();
      inv.receiver = local_at(expect(Tok::Kind::kIdent, "receiver local"));
    }
    inv.callee.is_static = !inv.receiver.has_value();
    expect_punct("(");
    if (!is_punct(")")) {
      for (;;) {
        inv.args.push_back(local_at(expect(Tok::Kind::kIdent, "argument local")));
        if (!is_punct(",")) break;
        next();
      }
    }
    expect_punct(")");
    if (inv.args.size() != inv.callee.arity()) {
      fail(sig_tok, "call passes " + std::to_string(inv.args.size()) +
                        " argument(s) but '" + inv.callee.to_string() + "' takes " +
                        std::to_string(inv.callee.arity()));
    }
    return inv;
  }

  MethodSignature signature_at(const Tok& tok, bool is_static) {
    try {
      return parse_signature(tok.text, is_static);
    } catch (const ParseError& e) {
      fail(tok, e.what());
    }
  }

  std::string local_at(const Tok& tok) {
    if (!is_local_name(tok.text)) fail(tok, "invalid local name '" + tok.text + "'");
    return tok.text;
  }

  void end_of_line() {
    if (at(Tok::Kind::kNewline) || at(Tok::Kind::kEnd)) return;
    fail(peek(), "unexpected '" + peek().text + "'");
  }

  void skip_newlines() {
    while (at(Tok::Kind::kNewline)) next();
  }

  const Tok& peek() const { return toks_[pos_]; }
  bool at(Tok::Kind k) const { return peek().kind == k; }
  const Tok& next() {
    const Tok& t = toks_[pos_];
    if (!at(Tok::Kind::kEnd)) ++pos_;
    return t;
  }
  bool is_ident(std::string_view s) const {
    return at(Tok::Kind::kIdent) && peek().text == s;
  }
  bool is_punct(std::string_view s) const {
    return at(Tok::Kind::kPunct) && peek().text == s;
  }
  const Tok& expect(Tok::Kind k, const std::string& what) {
    if (!at(k)) fail(peek(), "expected " + what + ", found " + describe(peek()));
    return next();
  }
  const Tok& expect_ident(std::string_view s) {
    if (!is_ident(s)) {
      fail(peek(), "expected '" + std::string(s) + "', found " + describe(peek()));
    }
    return next();
  }
  const Tok& expect_punct(std::string_view s) {
    if (!is_punct(s)) {
      fail(peek(), "expected '" + std::string(s) + "', found " + describe(peek()));
    }
    return next();
  }

  static std::string describe(const Tok& t) {
    switch (t.kind) {
      case Tok::Kind::kEnd:
        return "end of input";
      case Tok::Kind::kNewline:
        return "end of line";
      case Tok::Kind::kString:
        return "string \"" + t.text + "\"";
      default:
        return "'" + t.text + "'";
    }
  }

  [[noreturn]] void fail(const Tok& t, const std::string& message) const {
    const std::string prefix = label_.empty() ? "" : label_ + ": ";
    throw ParseError(prefix + message, t.line, t.column);
  }

  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
  std::string label_;
};

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string FieldRef::key() const {
  return (base_local ? std::string("*") : class_name) + "::" + field;
}

std::string FieldRef::to_string() const {
  return (base_local ? *base_local : class_name) + "." + field;
}

std::string IrClass::report_uri() const {
  if (source_file) {
    std::string uri = *source_file;
    std::replace(uri.begin(), uri.end(), '\\', '/');
    return uri;
  }
  std::string uri = name;
  std::replace(uri.begin(), uri.end(), '.', '/');
  return uri + ".class";
}

IrProgram::IrProgram(std::vector<IrClass> classes) : classes_(std::move(classes)) {
  for (const auto& cls : classes_) {
    for (const auto& m : cls.methods) {
      const std::string key = m.signature.to_string();
      if (!index_.emplace(key, MethodRef{&cls, &m}).second) {
        throw ParseError("duplicate method '" + key + "'", m.line, 1);
      }
    }
  }
}

std::optional<IrProgram::MethodRef> IrProgram::find(
    std::string_view signature_text) const {
  auto it = index_.find(signature_text);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool IrProgram::has_class(std::string_view name) const {
  return std::any_of(classes_.begin(), classes_.end(),
                     [&](const IrClass& c) { return c.name == name; });
}

std::vector<IrProgram::MethodRef> IrProgram::methods() const {
  std::vector<MethodRef> out;
  for (const auto& cls : classes_) {
    for (const auto& m : cls.methods) out.push_back({&cls, &m});
  }
  return out;
}

IrProgram IrProgram::merge(std::vector<IrProgram> parts) {
  std::vector<IrClass> all;
  for (auto& p : parts) {
    for (auto& c : p.classes_) all.push_back(std::move(c));
  }
  return IrProgram(std::move(all));
}

IrProgram parse_ir(std::string_view text, std::string_view file_label) {
  return IrParser(text, file_label).parse();
}

std::string print_ir(const IrProgram& program) {
  std::ostringstream out;
  for (const auto& cls : program.classes()) {
    out << "class " << cls.name;
    if (cls.source_file) out << " file " << quote(*cls.source_file);
    if (cls.super_name) out << " extends " << *cls.super_name;
    out << " {\n";
    for (const auto& m : cls.methods) {
      out << "  method " << quote(m.signature.to_string());
      if (m.signature.is_static) out << " static";
      out << " {\n";
      for (const auto& st : m.statements) {
        out << "    ";
        std::visit(
            [&](const auto& op) {
              using T = std::decay_t<decltype(op)>;
              if constexpr (std::is_same_v<T, stmt::Identity>) {
                out << op.local << " = ";
                if (op.slot.kind == SlotRef::Kind::kThis) {
                  out << "this";
                } else {
                  out << "param " << op.slot.index;
                }
              } else if constexpr (std::is_same_v<T, stmt::Const>) {
                out << op.local << " = const " << quote(op.literal);
              } else if constexpr (std::is_same_v<T, stmt::Copy>) {
                out << op.dst << " = " << op.src;
              } else if constexpr (std::is_same_v<T, stmt::Invoke>) {
                if (op.result) out << *op.result << " = ";
                out << "call " << quote(op.callee.to_string());
                if (op.receiver) out << " on " << *op.receiver;
                out << " (";
                for (std::size_t i = 0; i < op.args.size(); ++i) {
                  if (i > 0) out << ", ";
                  out << op.args[i];
                }
                out << ")";
              } else if constexpr (std::is_same_v<T, stmt::FieldStore>) {
                out << op.field.to_string() << " = " << op.src;
              } else if constexpr (std::is_same_v<T, stmt::FieldLoad>) {
                out << op.dst << " = " << op.field.to_string();
              } else if constexpr (std::is_same_v<T, stmt::Return>) {
                out << "return";
                if (op.local) out << " " << *op.local;
              }
            },
            st.op);
        out << " line " << st.line << "\n";
      }
      out << "  }\n";
    }
    out << "}\n";
  }
  return out.str();
}

std::string Diagnostic::to_string() const {
  std::string sev;
  switch (severity) {
    case Severity::kError:
      sev = "error";
      break;
    case Severity::kWarning:
      sev = "warning";
      break;
    case Severity::kNote:
      sev = "note";
      break;
  }
  std::string where = file.empty() ? "" : file + ":";
  return where + std::to_string(line) + ": " + sev + ": " + message;
}

std::vector<Diagnostic> validate(const IrProgram& program) {
  std::vector<Diagnostic> out;
  for (const auto& cls : program.classes()) {
    for (const auto& m : cls.methods) {
      std::set<std::string> defined;
      std::set<SlotRef> identities;
      auto use = [&](const std::string& local, std::size_t line) {
        if (!defined.contains(local)) {
          out.push_back({Diagnostic::Severity::kError, cls.ir_file, line,
                         "local '" + local + "' used before definition in '" +
                             m.signature.to_string() + "'"});
        }
      };
      for (const auto& st : m.statements) {
        std::visit(
            [&](const auto& op) {
              using T = std::decay_t<decltype(op)>;
              if constexpr (std::is_same_v<T, stmt::Identity>) {
                if (!identities.insert(op.slot).second) {
                  out.push_back({Diagnostic::Severity::kError, cls.ir_file, st.line,
                                 "duplicate identity for " + op.slot.to_string()});
                }
                if (op.slot.kind == SlotRef::Kind::kParam &&
                    op.slot.index >= m.signature.arity()) {
                  out.push_back({Diagnostic::Severity::kError, cls.ir_file, st.line,
                                 "param " + std::to_string(op.slot.index) +
                                     " out of range for '" +
                                     m.signature.to_string() + "'"});
                }
                if (op.slot.kind == SlotRef::Kind::kThis && m.signature.is_static) {
                  out.push_back({Diagnostic::Severity::kWarning, cls.ir_file, st.line,
                                 "'this' in static method"});
                }
                defined.insert(op.local);
              } else if constexpr (std::is_same_v<T, stmt::Const>) {
                defined.insert(op.local);
              } else if constexpr (std::is_same_v<T, stmt::Copy>) {
                use(op.src, st.line);
                defined.insert(op.dst);
              } else if constexpr (std::is_same_v<T, stmt::Invoke>) {
                if (op.receiver) use(*op.receiver, st.line);
                for (const auto& a : op.args) use(a, st.line);
                if (op.result) defined.insert(*op.result);
                const std::string text = op.callee.to_string();
                if (!program.find(text) && program.has_class(op.callee.declaring_class)) {
                  out.push_back({Diagnostic::Severity::kNote, cls.ir_file, st.line,
                                 "call to '" + text +
                                     "' which is not defined in the program"});
                }
              } else if constexpr (std::is_same_v<T, stmt::FieldStore>) {
                if (op.field.base_local) use(*op.field.base_local, st.line);
                use(op.src, st.line);
              } else if constexpr (std::is_same_v<T, stmt::FieldLoad>) {
                if (op.field.base_local) use(*op.field.base_local, st.line);
                defined.insert(op.dst);
              } else if constexpr (std::is_same_v<T, stmt::Return>) {
                if (op.local) use(*op.local, st.line);
              }
            },
            st.op);
      }
    }
  }
  return out;
}

}  // namespace ktaint
