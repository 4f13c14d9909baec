#include "ktaint/spec_dsl.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ktaint/error.hpp"

namespace ktaint {

namespace {

// ---------------------------------------------------------------------------
// Lexer

struct Token {
  enum class Kind { kIdent, kString, kInt, kPunct, kEnd };
  Kind kind = Kind::kEnd;
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
};

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' ||
         c == '.' || c == '-';
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = column;
    if (c == '"') {
      tok.kind = Token::Kind::kString;
      advance(1);
      bool closed = false;
      while (i < text.size()) {
        const char d = text[i];
        if (d == '"') {
          advance(1);
          closed = true;
          break;
        }
        if (d == '\n') break;
        if (d == '\\' && i + 1 < text.size()) {
          const char e = text[i + 1];
          tok.text += e == 'n' ? '\n' : e == 't' ? '\t' : e;
          advance(2);
          continue;
        }
        tok.text += d;
        advance(1);
      }
      if (!closed) throw ParseError("unterminated string", tok.line, tok.column);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      tok.kind = Token::Kind::kInt;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        tok.text += text[i];
        advance(1);
      }
    } else if (is_ident_start(c)) {
      tok.kind = Token::Kind::kIdent;
      while (i < text.size() && is_ident_char(text[i])) {
        tok.text += text[i];
        advance(1);
      }
    } else if (std::string_view("{}(),=[]").find(c) != std::string_view::npos) {
      tok.kind = Token::Kind::kPunct;
      tok.text = std::string(1, c);
      advance(1);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line,
                       column);
    }
    tokens.push_back(std::move(tok));
  }
  Token end;
  end.line = line;
  end.column = column;
  tokens.push_back(end);
  return tokens;
}

// ---------------------------------------------------------------------------
// Parser

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) : tokens_(tokenize(text)) {}

  Spec parse_spec() {
    Spec spec;
    if (is_ident("aliases")) parse_aliases(spec.aliases);
    std::set<std::string> ids;
    while (!at_end()) {
      const Token& start = peek();
      if (!is_ident("query")) {
        if (is_ident("aliases")) fail(start, "alias block must come first");
        fail(start, "expected 'query', found '" + start.text + "'");
      }
      TaintQuery q = parse_query();
      if (!ids.insert(q.id).second) {
        fail(start, "duplicate query id '" + q.id + "'");
      }
      spec.queries.push_back(std::move(q));
    }
    if (spec.queries.empty()) {
      fail(peek(), "spec declares no query");
    }
    return spec;
  }

  TypeAliasTable parse_alias_file() {
    TypeAliasTable table;
    if (!at_end()) parse_aliases(table);
    if (!at_end()) fail(peek(), "unexpected '" + peek().text + "' after aliases");
    return table;
  }

 private:
  void parse_aliases(TypeAliasTable& table) {
    expect_ident("aliases");
    expect_punct("{");
    while (!is_punct("}")) {
      const Token& name = expect_kind(Token::Kind::kIdent, "alias name");
      expect_punct("=");
      const Token& target = next();
      if (target.kind != Token::Kind::kIdent &&
          target.kind != Token::Kind::kString) {
        fail(target, "expected alias target");
      }
      try {
        table.add(name.text, target.text);
      } catch (const SpecError& e) {
        fail(name, e.what());
      }
    }
    expect_punct("}");
  }

  TaintQuery parse_query() {
    const Token& kw = expect_ident("query");
    TaintQuery q;
    q.line = kw.line;
    q.id = expect_kind(Token::Kind::kString, "query id string").text;
    if (q.id.empty()) fail(kw, "query id must not be empty");
    expect_punct("{");
    if (is_ident("message")) {
      next();
      q.message = expect_kind(Token::Kind::kString, "message string").text;
    }
    while (!is_punct("}")) {
      const Token& role_tok = expect_kind(Token::Kind::kIdent, "rule role");
      Role role;
      if (role_tok.text == "source") {
        role = Role::kSource;
      } else if (role_tok.text == "sink") {
        role = Role::kSink;
      } else if (role_tok.text == "sanitizer") {
        role = Role::kSanitizer;
      } else if (role_tok.text == "propagator") {
        role = Role::kPropagator;
      } else {
        fail(role_tok, "unknown keyword '" + role_tok.text +
                           "' (expected source, sink, sanitizer, propagator "
                           "or message)");
      }
      MethodRule rule = parse_rule(role_tok, role);
      switch (role) {
        case Role::kSource:
          q.sources.push_back(std::move(rule));
          break;
        case Role::kSink:
          q.sinks.push_back(std::move(rule));
          break;
        case Role::kSanitizer:
          q.sanitizers.push_back(std::move(rule));
          break;
        case Role::kPropagator:
          q.propagators.push_back(std::move(rule));
          break;
      }
    }
    expect_punct("}");
    if (q.sources.empty()) fail(kw, "query " + q.id + " has no source");
    if (q.sinks.empty()) fail(kw, "query " + q.id + " has no sink");
    return q;
  }

  MethodRule parse_rule(const Token& role_tok, Role role) {
    MethodRule rule;
    rule.line = role_tok.line;
    expect_punct("{");
    rule.descriptor = parse_descriptor();
    parse_attributes(rule.attributes);
    bool any_slot_line = false;
    while (is_ident("in") || is_ident("out")) {
      const bool is_in = next().text == "in";
      auto& slots = is_in ? rule.in_slots : rule.out_slots;
      for (;;) {
        slots.push_back(parse_slot(rule.descriptor));
        if (!is_punct(",")) break;
        next();
      }
      any_slot_line = true;
    }
    if (!any_slot_line) {
      fail(peek(), "expected 'in' or 'out' slot line, found '" + peek().text + "'");
    }
    expect_punct("}");

    const bool has_in = !rule.in_slots.empty();
    const bool has_out = !rule.out_slots.empty();
    switch (role) {
      case Role::kSource:
        if (!has_out) fail(role_tok, "source needs an 'out' slot");
        break;
      case Role::kSink:
        if (!has_in) fail(role_tok, "sink needs an 'in' slot");
        break;
      case Role::kSanitizer:
        if (!has_in) fail(role_tok, "sanitizer needs an 'in' slot");
        break;
      case Role::kPropagator:
        if (!has_in || !has_out) {
          fail(role_tok, "propagator needs both 'in' and 'out' slots");
        }
        break;
    }
    return rule;
  }

  Descriptor parse_descriptor() {
    const Token& kw = expect_kind(Token::Kind::kIdent, "rule descriptor");
    const std::string& k = kw.text;
    if (k == "method") {
      const Token& sig = expect_kind(Token::Kind::kString, "signature string");
      return descriptor::Method{parse_source_signature(sig, /*with_class=*/true)};
    }
    if (k == "property") {
      descriptor::Property d;
      const Token& acc = expect_kind(Token::Kind::kIdent, "getter or setter");
      if (acc.text == "getter") {
        d.accessor = AccessorWant::kGetter;
      } else if (acc.text == "setter") {
        d.accessor = AccessorWant::kSetter;
      } else {
        fail(acc, "expected getter or setter");
      }
      d.class_name = keyword_string("class");
      d.name = keyword_string("name");
      d.type = keyword_type("type");
      return d;
    }
    if (k == "topLevel") {
      descriptor::TopLevel d;
      d.package_name = keyword_string("package");
      d.file_name = keyword_string("file");
      expect_ident("method");
      const Token& sig = expect_kind(Token::Kind::kString, "signature string");
      d.signature = parse_source_signature(sig, /*with_class=*/false);
      return d;
    }
    if (k == "extensionFunction") {
      descriptor::ExtensionFunction d;
      d.container = keyword_string("at");
      d.receiver = keyword_type("receiver");
      d.name = keyword_string("name");
      expect_ident("params");
      d.params = parse_type_list();
      d.return_type = keyword_type("returns");
      return d;
    }
    if (k == "extensionProperty") {
      descriptor::ExtensionProperty d;
      d.container = keyword_string("at");
      d.receiver = keyword_type("receiver");
      d.name = keyword_string("name");
      d.type = keyword_type("type");
      if (is_ident("getter")) {
        next();
      } else if (is_ident("setter")) {
        next();
        d.setter_requested = true;
      }
      return d;
    }
    if (k == "companionExtension") {
      descriptor::CompanionExtension d;
      d.class_name = keyword_string("class");
      if (is_ident("companion")) {
        next();
        d.companion_name = expect_kind(Token::Kind::kString, "companion name").text;
      }
      d.container = keyword_string("at");
      if (is_ident("receiver")) {
        fail(peek(), "companionExtension derives its receiver from class and "
                     "companion; drop 'receiver'");
      }
      d.name = keyword_string("name");
      expect_ident("params");
      d.params = parse_type_list();
      d.return_type = keyword_type("returns");
      return d;
    }
    if (k == "infix") {
      descriptor::Infix d;
      d.receiver = keyword_type("receiver");
      d.name = keyword_string("name");
      expect_ident("param");
      const Token& params = expect_kind(Token::Kind::kString, "parameter type");
      for (const auto& p : split_type_list(params.text)) {
        d.params.push_back(parse_type_at(params, p));
      }
      d.return_type = keyword_type("returns");
      return d;
    }
    if (k == "operator") {
      descriptor::Operator d;
      d.symbol = expect_kind(Token::Kind::kString, "operator symbol").text;
      d.receiver = keyword_type("receiver");
      if (is_ident("operands")) {
        next();
        d.operands = parse_type_list();
      }
      d.return_type = keyword_type("returns");
      return d;
    }
    fail(kw, "unknown descriptor '" + k + "'");
  }

  void parse_attributes(RuleAttributes& attrs) {
    for (;;) {
      if (is_ident("defaults")) {
        next();
        const Token& kind = expect_kind(Token::Kind::kIdent, "defaults kind");
        if (kind.text == "member") {
          attrs.defaults = DefaultsKind::kMember;
        } else if (kind.text == "topLevel") {
          attrs.defaults = DefaultsKind::kTopLevel;
        } else if (kind.text == "constructor") {
          attrs.defaults = DefaultsKind::kConstructor;
        } else {
          fail(kind, "expected member, topLevel or constructor");
        }
      } else if (is_ident("no-defaults")) {
        next();
        attrs.no_defaults = true;
      } else if (is_ident("sealed")) {
        next();
        attrs.sealed = true;
      } else if (is_ident("internal")) {
        next();
        attrs.internal_module = expect_kind(Token::Kind::kString, "module name").text;
      } else {
        break;
      }
    }
    if (attrs.no_defaults && attrs.defaults) {
      fail(peek(), "'defaults' and 'no-defaults' are mutually exclusive");
    }
  }

  SlotRef parse_slot(const Descriptor& d) {
    const Token& tok = expect_kind(Token::Kind::kIdent, "slot");
    if (tok.text == "return") return SlotRef::ret();
    if (tok.text == "this") {
      SlotRef slot = SlotRef::this_slot();
      if (is_punct("[")) {
        next();
        const Token& kind = expect_kind(Token::Kind::kIdent, "receiver kind");
        if (kind.text == "dispatch") {
          slot.receiver_kind = ReceiverKind::kDispatch;
        } else if (kind.text == "extension") {
          slot.receiver_kind = ReceiverKind::kExtension;
        } else {
          fail(kind, "expected dispatch or extension");
        }
        expect_punct("]");
        if (!is_extension(d)) {
          fail(tok, "qualified this is only allowed on extension descriptors");
        }
      }
      return slot;
    }
    std::string digits;
    if (tok.text == "param") {
      digits = expect_kind(Token::Kind::kInt, "parameter number").text;
    } else if (tok.text.starts_with("param") && tok.text.size() > 5 &&
               std::all_of(tok.text.begin() + 5, tok.text.end(),
                           [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      digits = tok.text.substr(5);
    } else {
      fail(tok, "unknown slot '" + tok.text + "'");
    }
    const std::size_t one_based = std::stoul(digits);
    if (one_based == 0) fail(tok, "parameter numbers start at 1");
    return SlotRef::param(one_based - 1);
  }

  std::vector<KotlinTypeExpr> parse_type_list() {
    std::vector<KotlinTypeExpr> types;
    expect_punct("(");
    if (!is_punct(")")) {
      for (;;) {
        const Token& t = expect_kind(Token::Kind::kString, "type string");
        types.push_back(parse_type_at(t, t.text));
        if (!is_punct(",")) break;
        next();
      }
    }
    expect_punct(")");
    return types;
  }

  SourceSignature parse_source_signature(const Token& tok, bool with_class) {
    const std::string text = with_class ? tok.text : "_: " + tok.text;
    MethodSignature raw;
    try {
      raw = parse_signature(text);
    } catch (const ParseError& e) {
      fail(tok, e.what());
    }
    SourceSignature sig;
    if (with_class) sig.declaring_class = raw.declaring_class;
    sig.name = raw.name;
    sig.return_type = parse_type_at(tok, raw.return_type);
    for (const auto& p : raw.params) sig.params.push_back(parse_type_at(tok, p));
    return sig;
  }

  KotlinTypeExpr parse_type_at(const Token& tok, std::string_view text) {
    try {
      return parse_kotlin_type(text);
    } catch (const ParseError& e) {
      fail(tok, e.what());
    }
  }

  std::string keyword_string(std::string_view keyword) {
    expect_ident(keyword);
    return expect_kind(Token::Kind::kString, std::string(keyword) + " string").text;
  }

  KotlinTypeExpr keyword_type(std::string_view keyword) {
    expect_ident(keyword);
    const Token& t = expect_kind(Token::Kind::kString, std::string(keyword) + " type");
    return parse_type_at(t, t.text);
  }

  const Token& peek() const { return tokens_[pos_]; }
  bool at_end() const { return peek().kind == Token::Kind::kEnd; }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (!at_end()) ++pos_;
    return t;
  }
  bool is_ident(std::string_view text) const {
    return peek().kind == Token::Kind::kIdent && peek().text == text;
  }
  bool is_punct(std::string_view text) const {
    return peek().kind == Token::Kind::kPunct && peek().text == text;
  }

  const Token& expect_ident(std::string_view text) {
    if (!is_ident(text)) {
      fail(peek(), "expected '" + std::string(text) + "', found " + describe(peek()));
    }
    return next();
  }
  const Token& expect_punct(std::string_view text) {
    if (!is_punct(text)) {
      fail(peek(), "expected '" + std::string(text) + "', found " + describe(peek()));
    }
    return next();
  }
  const Token& expect_kind(Token::Kind kind, const std::string& what) {
    if (peek().kind != kind) {
      fail(peek(), "expected " + what + ", found " + describe(peek()));
    }
    return next();
  }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Token::Kind::kEnd:
        return "end of input";
      case Token::Kind::kString:
        return "string \"" + t.text + "\"";
      default:
        return "'" + t.text + "'";
    }
  }

  [[noreturn]] static void fail(const Token& tok, const std::string& message) {
    throw ParseError(message, tok.line, tok.column);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Normalization

struct Synthesized {
  MethodSignature signature;
  std::optional<DefaultsKind> inferred_defaults;
  std::size_t source_arity = 0;
  bool extension = false;  // receiver injected as param(0)
};

class Normalizer {
 public:
  Normalizer(const TypeAliasTable& aliases, const Options& options)
      : aliases_(aliases), options_(options) {
    if (options.no_type_mapping) {
      render_ = [](const KotlinTypeExpr& t) { return to_string(t); };
    } else {
      render_ = mapping_renderer();
    }
  }

  NormalizedRule normalize_rule(const MethodRule& rule, Role role,
                                std::size_t index) {
    NormalizedRule out;
    out.role = role;
    out.index = index;
    out.line = rule.line;
    Synthesized s = std::visit([&](const auto& d) { return synthesize(d); },
                               rule.descriptor);

    std::vector<SlotRef> in_slots;
    std::vector<SlotRef> out_slots;
    for (const auto& slot : rule.in_slots) in_slots.push_back(base_slot(slot, s));
    for (const auto& slot : rule.out_slots) out_slots.push_back(base_slot(slot, s));

    std::vector<SignatureVariant> variants =
        expand_defaults(s, rule.attributes, is_extension(rule.descriptor));
    const MethodSignature& base = s.signature;
    if (rule.attributes.sealed) variants.push_back(sealed_ctor_variant(base));
    if (rule.attributes.internal_module) {
      std::string warning;
      variants.push_back(
          internal_mangle(base, *rule.attributes.internal_module, &warning));
      if (!warning.empty()) out.warnings.push_back(warning);
    }

    for (auto& v : variants) {
      NormalizedVariant nv;
      for (const auto& slot : in_slots) nv.in_slots.push_back(v.remap(slot));
      for (const auto& slot : out_slots) nv.out_slots.push_back(v.remap(slot));
      for (const auto& slot : nv.in_slots) check_slot(slot, v.signature);
      for (const auto& slot : nv.out_slots) check_slot(slot, v.signature);
      nv.variant = std::move(v);
      out.variants.push_back(std::move(nv));
    }
    return out;
  }

 private:
  KotlinTypeExpr resolve(const KotlinTypeExpr& t) const {
    if (options_.no_alias_resolution) return t;
    return resolve_alias(aliases_, t);
  }

  std::vector<KotlinTypeExpr> resolve(const std::vector<KotlinTypeExpr>& ts) const {
    std::vector<KotlinTypeExpr> out;
    for (const auto& t : ts) out.push_back(resolve(t));
    return out;
  }

  // Class names may be aliases too (`ArrayList`).
  std::string resolve_class(const std::string& name) const {
    if (options_.no_alias_resolution) return name;
    const std::string* canonical = aliases_.find(name);
    if (canonical == nullptr) return name;
    return resolve_class(*canonical);
  }

  std::vector<std::string> render_all(const std::vector<KotlinTypeExpr>& ts) const {
    std::vector<std::string> out;
    for (const auto& t : ts) out.push_back(render_(resolve(t)));
    return out;
  }

  Synthesized synthesize(const descriptor::Method& d) const {
    const SourceSignature& src = d.signature;
    Synthesized s;
    s.signature = {resolve_class(src.declaring_class),
                   render_(resolve(src.return_type)), src.name,
                   render_all(src.params), false, src.name == kConstructorName};
    s.source_arity = src.params.size();
    s.inferred_defaults = s.signature.is_constructor ? DefaultsKind::kConstructor
                                                     : DefaultsKind::kMember;
    return s;
  }

  Synthesized synthesize(const descriptor::Property& d) const {
    Synthesized s;
    const std::string cls = resolve_class(d.class_name);
    const KotlinTypeExpr type = resolve(d.type);
    if (options_.no_property_accessors) {
      // Field-style reading: the property name used as a method name.
      const std::string rendered = render_(type);
      if (d.accessor == AccessorWant::kGetter) {
        s.signature = {cls, rendered, d.name, {}, false, false};
      } else {
        s.signature = {cls, "void", d.name, {rendered}, false, false};
      }
    } else {
      s.signature = property_accessors(cls, d.name, type, d.accessor, render_).front();
    }
    s.source_arity = d.accessor == AccessorWant::kGetter ? 0 : 1;
    s.inferred_defaults = DefaultsKind::kMember;
    return s;
  }

  Synthesized synthesize(const descriptor::TopLevel& d) const {
    Synthesized s;
    std::string cls;
    if (options_.no_top_level_classes) {
      // Java reading: the file name is the class name.
      std::string_view file = d.file_name;
      if (file.ends_with(".kt")) file.remove_suffix(3);
      cls = d.package_name.empty() ? std::string(file)
                                   : d.package_name + "." + std::string(file);
    } else {
      cls = top_level_class(d.package_name, d.file_name);
    }
    const SourceSignature& src = d.signature;
    s.signature = {cls, render_(resolve(src.return_type)), src.name,
                   render_all(src.params), true, false};
    s.source_arity = src.params.size();
    s.inferred_defaults = DefaultsKind::kTopLevel;
    return s;
  }

  Synthesized synthesize(const descriptor::ExtensionFunction& d) const {
    Synthesized s;
    s.source_arity = d.params.size();
    const std::string container = resolve_class(d.container);
    if (options_.no_extension_handling) {
      s.signature = {container, render_(resolve(d.return_type)), d.name,
                     render_all(d.params), false, false};
    } else {
      s.signature = extension_signature(container, resolve(d.receiver), d.name,
                                        resolve(d.params), resolve(d.return_type),
                                        render_);
      s.extension = true;
    }
    return s;
  }

  Synthesized synthesize(const descriptor::ExtensionProperty& d) const {
    if (d.setter_requested) {
      throw SpecError("extension property '" + d.name +
                      "' has no setter; only the getter can be specified");
    }
    Synthesized s;
    const std::string container = resolve_class(d.container);
    if (options_.no_extension_handling) {
      s.signature = property_accessors(container, d.name, resolve(d.type),
                                       AccessorWant::kGetter, render_)
                        .front();
    } else {
      s.signature = extension_property_getter(container, resolve(d.receiver),
                                              d.name, resolve(d.type), render_);
      s.extension = true;
    }
    return s;
  }

  Synthesized synthesize(const descriptor::CompanionExtension& d) const {
    Synthesized s;
    s.source_arity = d.params.size();
    const std::string container = resolve_class(d.container);
    if (options_.no_extension_handling) {
      s.signature = {container, render_(resolve(d.return_type)), d.name,
                     render_all(d.params), false, false};
    } else {
      KotlinTypeExpr wrapper;
      wrapper.base = companion_wrapper(resolve_class(d.class_name), d.companion_name);
      wrapper.raw = wrapper.base;
      s.signature = extension_signature(container, wrapper, d.name,
                                        resolve(d.params), resolve(d.return_type),
                                        render_);
      s.extension = true;
    }
    return s;
  }

  Synthesized synthesize(const descriptor::Infix& d) const {
    Synthesized s;
    s.signature = infix_signature(resolve(d.receiver), d.name, resolve(d.params),
                                  resolve(d.return_type), render_);
    if (options_.no_infix_handling) {
      // Both operands read as arguments of a plain call.
      s.signature.params.insert(s.signature.params.begin(),
                                s.signature.declaring_class);
    }
    s.source_arity = 1;
    s.inferred_defaults = DefaultsKind::kMember;
    return s;
  }

  Synthesized synthesize(const descriptor::Operator& d) const {
    Synthesized s;
    s.signature = operator_signature(d.symbol, resolve(d.receiver),
                                     resolve(d.operands), resolve(d.return_type),
                                     render_);
    if (options_.no_operator_mapping) s.signature.name = d.symbol;
    s.source_arity = d.operands.size();
    s.inferred_defaults = DefaultsKind::kMember;
    return s;
  }

  SlotRef base_slot(const SlotRef& slot, const Synthesized& s) const {
    if (slot.kind == SlotRef::Kind::kParam && slot.index >= s.source_arity) {
      throw SpecError("slot param" + std::to_string(slot.index + 1) +
                      " is out of range for '" + s.signature.name + "' with " +
                      std::to_string(s.source_arity) + " parameter(s)");
    }
    if (!s.extension) {
      SlotRef out = slot;
      out.receiver_kind.reset();
      return out;
    }
    switch (slot.kind) {
      case SlotRef::Kind::kThis:
        if (slot.receiver_kind == ReceiverKind::kDispatch) return SlotRef::this_slot();
        return SlotRef::param(0);
      case SlotRef::Kind::kParam:
        return SlotRef::param(slot.index + 1);
      case SlotRef::Kind::kReturn:
        return SlotRef::ret();
    }
    return slot;
  }

  std::vector<SignatureVariant> expand_defaults(const Synthesized& s,
                                                const RuleAttributes& attrs,
                                                bool extension_descriptor) const {
    const auto base_only = [&] {
      return std::vector<SignatureVariant>{
          {s.signature, identity_slot_map(s.signature.arity()), VariantOrigin::kBase}};
    };
    if (attrs.no_defaults || options_.no_default_expansion) return base_only();
    if (extension_descriptor && attrs.defaults == DefaultsKind::kMember) {
      throw SpecError("'defaults member' is not supported on extension "
                      "descriptors; the bytecode shape is unspecified");
    }
    std::optional<DefaultsKind> kind = attrs.defaults;
    if (!kind) kind = s.inferred_defaults;
    if (!kind) return base_only();
    return default_variants(s.signature, *kind);
  }

  static void check_slot(const SlotRef& slot, const MethodSignature& sig) {
    if (slot.kind == SlotRef::Kind::kParam && slot.index >= sig.arity()) {
      throw std::logic_error("slot " + slot.to_string() + " outside '" +
                             sig.to_string() + "'");
    }
  }

  const TypeAliasTable& aliases_;
  const Options& options_;
  TypeRenderer render_;
};

std::string join_slots(const std::vector<SlotRef>& slots) {
  if (slots.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (i > 0) out += ",";
    out += slots[i].to_string();
  }
  return out;
}

}  // namespace

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kSource:
      return "source";
    case Role::kSink:
      return "sink";
    case Role::kSanitizer:
      return "sanitizer";
    case Role::kPropagator:
      return "propagator";
  }
  return "?";
}

bool is_extension(const Descriptor& d) {
  return std::holds_alternative<descriptor::ExtensionFunction>(d) ||
         std::holds_alternative<descriptor::ExtensionProperty>(d) ||
         std::holds_alternative<descriptor::CompanionExtension>(d);
}

const std::vector<MethodRule>& TaintQuery::rules(Role role) const {
  switch (role) {
    case Role::kSource:
      return sources;
    case Role::kSink:
      return sinks;
    case Role::kSanitizer:
      return sanitizers;
    case Role::kPropagator:
      return propagators;
  }
  return sources;
}

Spec parse_spec(std::string_view text) { return SpecParser(text).parse_spec(); }

TypeAliasTable parse_alias_file(std::string_view text) {
  return SpecParser(text).parse_alias_file();
}

NormalizedQuery normalize(const TaintQuery& query, const TypeAliasTable& aliases,
                          const Options& options) {
  NormalizedQuery out;
  out.id = query.id;
  out.message = query.message;
  Normalizer normalizer(aliases, options);
  for (Role role : {Role::kSource, Role::kSink, Role::kSanitizer, Role::kPropagator}) {
    const auto& rules = query.rules(role);
    for (std::size_t i = 0; i < rules.size(); ++i) {
      try {
        out.rules.push_back(normalizer.normalize_rule(rules[i], role, i));
      } catch (const SpecError& e) {
        throw SpecError("query " + query.id + ", " + std::string(to_string(role)) +
                        " at line " + std::to_string(rules[i].line) + ": " +
                        e.what());
      }
    }
  }
  return out;
}

std::vector<NormalizedQuery> normalize_all(const Spec& spec, const Options& options) {
  std::vector<NormalizedQuery> out;
  for (const auto& q : spec.queries) out.push_back(normalize(q, spec.aliases, options));
  return out;
}

std::string dump_normalized(const std::vector<NormalizedQuery>& queries) {
  std::vector<const NormalizedQuery*> sorted;
  for (const auto& q : queries) sorted.push_back(&q);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto* a, const auto* b) { return a->id < b->id; });
  std::ostringstream out;
  for (const auto* q : sorted) {
    out << "query " << q->id << "\n";
    if (!q->message.empty()) out << "  message " << q->message << "\n";
    for (const auto& rule : q->rules) {
      out << "  " << to_string(rule.role) << " #" << rule.index << "\n";
      for (const auto& v : rule.variants) {
        out << "    [" << to_string(v.variant.origin) << "] "
            << v.variant.signature.to_string() << "  in=" << join_slots(v.in_slots)
            << " out=" << join_slots(v.out_slots) << "\n";
      }
      for (const auto& w : rule.warnings) out << "    warning: " << w << "\n";
    }
  }
  return out.str();
}

}  // namespace ktaint
