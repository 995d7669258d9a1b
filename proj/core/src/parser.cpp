#include "gkat/parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <vector>

namespace gkat {

Lang parse_lang(std::string_view s) {
  if (s == "gkat") return Lang::Gkat;
  if (s == "cfgkat") return Lang::Cfgkat;
  throw InputError("unknown language '" + std::string(s) + "' (expected gkat or cfgkat)");
}

namespace {

enum class Tok { Ident, Int, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

std::vector<Token> lex(std::string_view src, std::string_view name) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const int l = line, cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Int, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    static const char* two[] = {":=", "==", "&&", "||"};
    bool matched = false;
    for (const char* t : two) {
      if (src.substr(i, 2) == t) {
        out.push_back({Tok::Sym, t, l, cl});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("(){};!-").find(c) != std::string_view::npos) {
      out.push_back({Tok::Sym, std::string(1, c), l, cl});
      advance(1);
      continue;
    }
    std::ostringstream os;
    os << name << ':' << l << ':' << cl << ": unexpected character '" << c << "'";
    throw InputError(os.str());
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

bool is_keyword(const std::string& s) {
  static const char* kws[] = {"if",    "else", "while", "do",    "assert", "break", "continue",
                              "return", "goto", "label", "diverge", "true", "false"};
  for (const char* k : kws)
    if (s == k) return true;
  return false;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, Registry& reg, Lang lang, std::string_view name)
      : toks_(std::move(toks)), reg_(reg), lang_(lang), name_(name) {}

  Exp program() {
    std::vector<Exp> stmts;
    while (peek().kind != Tok::End) stmts.push_back(stmt());
    if (lang_ == Lang::Cfgkat && (stmts.empty() || stmts.back().kind() != Exp::Kind::Return))
      stmts.push_back(Exp::ret());
    return sequence(stmts);
  }

  std::vector<std::string> labels() const { return label_names_; }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void error(const Token& t, const std::string& msg) const {
    std::ostringstream os;
    os << name_ << ':' << t.line << ':' << t.col << ": " << msg;
    throw InputError(os.str());
  }

  bool at_sym(const char* s) const { return peek().kind == Tok::Sym && peek().text == s; }
  bool at_kw(const char* s) const { return peek().kind == Tok::Ident && peek().text == s; }

  void expect(const char* s) {
    if (!at_sym(s)) error(peek(), std::string("expected '") + s + "', found " + describe(peek()));
    next();
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return "'" + t.text + "'";
  }

  std::string ident() {
    const Token& t = peek();
    if (t.kind != Tok::Ident || is_keyword(t.text)) error(t, "expected identifier, found " + describe(t));
    return next().text;
  }

  Value integer() {
    bool minus = false;
    if (at_sym("-")) {
      next();
      minus = true;
    }
    const Token& t = peek();
    if (t.kind != Tok::Int) error(t, "expected integer, found " + describe(t));
    next();
    try {
      const long long v = std::stoll(t.text);
      if (v > 0x7fffffff) error(t, "integer out of range");
      return static_cast<Value>(minus ? -v : v);
    } catch (const std::out_of_range&) {
      error(t, "integer out of range");
    }
  }

  // Declares with role checking; conflicts are reported at the token.
  template <class F>
  auto declare(const Token& t, F f) {
    try {
      return f();
    } catch (const InputError& e) {
      error(t, e.what());
    }
  }

  void cf_only(const Token& t) {
    if (lang_ == Lang::Gkat) error(t, "'" + t.text + "' is not part of GKAT");
  }

  static Exp sequence(const std::vector<Exp>& stmts) {
    if (stmts.empty()) return Exp::skip();
    Exp e = stmts.back();
    for (std::size_t i = stmts.size() - 1; i-- > 0;) e = Exp::seq(stmts[i], e);
    return e;
  }

  Exp block() {
    expect("{");
    std::vector<Exp> stmts;
    while (!at_sym("}")) {
      if (peek().kind == Tok::End) error(peek(), "expected '}', found end of input");
      stmts.push_back(stmt());
    }
    next();
    return sequence(stmts);
  }

  BExp paren_bexp() {
    expect("(");
    BExp b = bexp();
    expect(")");
    return b;
  }

  Exp stmt() {
    const Token t = peek();
    if (t.kind != Tok::Ident) error(t, "expected statement, found " + describe(t));
    if (t.text == "if") {
      next();
      const BExp b = paren_bexp();
      const Exp then = block();
      Exp els = Exp::skip();
      if (at_kw("else")) {
        next();
        els = at_sym("{") ? block() : stmt();
      }
      return Exp::ite(b, then, els);
    }
    if (t.text == "while") {
      next();
      const BExp b = paren_bexp();
      return Exp::loop(b, block());
    }
    if (t.text == "do") {
      next();
      const std::size_t labels_before = label_names_.size();
      const Exp body = block();
      if (!at_kw("while")) error(peek(), "expected 'while', found " + describe(peek()));
      next();
      const BExp b = paren_bexp();
      expect(";");
      if (lang_ == Lang::Gkat) return Exp::seq(body, Exp::loop(b, body));
      if (label_names_.size() != labels_before) error(t, "labels inside a do-while body are not supported");
      return Exp::unfold(body, Exp::loop(b, body));
    }
    if (t.text == "assert") {
      next();
      const BExp b = paren_bexp();
      expect(";");
      return Exp::test(b);
    }
    if (t.text == "break" || t.text == "continue" || t.text == "return") {
      cf_only(t);
      next();
      expect(";");
      return t.text == "break" ? Exp::brk() : t.text == "continue" ? Exp::cont() : Exp::ret();
    }
    if (t.text == "goto" || t.text == "label") {
      cf_only(t);
      next();
      const Token lt = peek();
      const LabelId l = label_id(ident());
      expect(";");
      if (t.text == "goto") return Exp::go(l);
      if (defined_[l]) error(lt, "label '" + lt.text + "' defined twice");
      defined_[l] = true;
      return Exp::label(l);
    }
    if (t.text == "diverge") {
      next();
      expect(";");
      return Exp::loop(BExp::one(), Exp::skip());
    }
    if (is_keyword(t.text)) error(t, "unexpected " + describe(t));
    next();
    if (at_sym(":=")) {
      cf_only(t);
      next();
      const Value v = integer();
      expect(";");
      return Exp::assign(declare(t, [&] { return reg_.var(t.text); }), v);
    }
    expect(";");
    return Exp::action(declare(t, [&] { return reg_.action(t.text); }));
  }

  LabelId label_id(const std::string& n) {
    auto [it, fresh] = label_ids_.emplace(n, static_cast<LabelId>(label_names_.size()));
    if (fresh) {
      label_names_.push_back(n);
      defined_.push_back(false);
    }
    return it->second;
  }

  BExp bexp() {
    BExp b = conj_term();
    while (at_sym("||")) {
      next();
      b = disj(b, conj_term());
    }
    return b;
  }

  BExp conj_term() {
    BExp b = unary();
    while (at_sym("&&")) {
      next();
      b = conj(b, unary());
    }
    return b;
  }

  BExp unary() {
    if (at_sym("!")) {
      next();
      return neg(unary());
    }
    if (at_sym("(")) return paren_bexp();
    const Token t = peek();
    if (t.kind == Tok::Int) {
      next();
      if (t.text == "0") return BExp::zero();
      if (t.text == "1") return BExp::one();
      error(t, "expected 0 or 1, found " + describe(t));
    }
    if (at_kw("true")) {
      next();
      return BExp::one();
    }
    if (at_kw("false")) {
      next();
      return BExp::zero();
    }
    const std::string n = ident();
    if (at_sym("==")) {
      if (lang_ == Lang::Gkat) error(t, "indicator test '" + n + " == ...' is not part of GKAT");
      next();
      const Value v = integer();
      return BExp::ind(declare(t, [&] { return reg_.var(n); }), v);
    }
    return BExp::test(declare(t, [&] { return reg_.test(n); }));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Registry& reg_;
  Lang lang_;
  std::string name_;
  std::unordered_map<std::string, LabelId> label_ids_;
  std::vector<std::string> label_names_;
  std::vector<bool> defined_;
};

}  // namespace

Program parse_program(std::string_view src, std::shared_ptr<Registry> reg, Lang lang, std::string_view name) {
  Parser p(lex(src, name), *reg, lang, name);
  Program out;
  out.body = p.program();
  out.labels = p.labels();
  out.registry = std::move(reg);
  if (lang == Lang::Cfgkat) {
    const auto violations = well_formed(out.body, &out.labels);
    if (!violations.empty()) {
      std::ostringstream os;
      os << name << ": ill-formed program";
      for (const Violation& v : violations) os << "\n  condition " << v.condition << ": " << v.message;
      throw InputError(os.str());
    }
  }
  return out;
}

Program parse_file(const std::string& path, std::shared_ptr<Registry> reg, Lang lang) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_program(buf.str(), std::move(reg), lang, path);
}

}  // namespace gkat
