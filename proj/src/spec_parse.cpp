#include <cctype>
#include <charconv>

#include "tmsr/error.hpp"
#include "tmsr/spec.hpp"

namespace tmsr {

namespace {

enum class Tok { ident, number, string, punct, end };

struct Token {
  Tok kind;
  std::string text;
  std::uint64_t value = 0;
  Loc loc;
};

[[noreturn]] void fail(Diag d, Loc at, const std::string& msg) {
  throw SpecError(d, at.line, at.col, msg);
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

// Tokenizes one physical line (comment already stripped) into `out`.
void lex_line(const std::string& s, int line, std::vector<Token>& out) {
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    Loc at{line, static_cast<int>(i) + 1};
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      out.push_back({Tok::ident, s.substr(i, j - i), 0, at});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      std::uint64_t v = 0;
      auto [p, ec] = std::from_chars(s.data() + i, s.data() + j, v);
      if (ec != std::errc()) fail(Diag::syntax, at, "number out of range");
      out.push_back({Tok::number, s.substr(i, j - i), v, at});
      i = j;
    } else if (c == '"') {
      std::size_t j = s.find('"', i + 1);
      if (j == std::string::npos) fail(Diag::syntax, at, "unterminated string");
      out.push_back({Tok::string, s.substr(i + 1, j - i - 1), 0, at});
      i = j + 1;
    } else {
      std::string p(1, c);
      if ((c == '-' || c == '>') && i + 1 < s.size() && (s[i + 1] == '>' || s[i + 1] == '=')) {
        if (c == '-' && s[i + 1] == '>') p = "->";
        if (c == '>' && s[i + 1] == '=') p = ">=";
      }
      static const std::string singles = "(),:@|{}+-=>";
      if (p.size() == 1 && singles.find(c) == std::string::npos)
        fail(Diag::syntax, at, std::string("unexpected character '") + c + "'");
      out.push_back({Tok::punct, p, 0, at});
      i += p.size();
    }
  }
}

std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {
    Loc last = t_.empty() ? Loc{} : t_.back().loc;
    t_.push_back({Tok::end, "", 0, last});
  }

  const Token& peek() const { return t_[i_]; }
  bool at_end() const { return t_[i_].kind == Tok::end; }
  bool is(const char* p) const { return t_[i_].kind == Tok::punct && t_[i_].text == p; }
  bool accept(const char* p) {
    if (!is(p)) return false;
    ++i_;
    return true;
  }
  void expect(const char* p) {
    if (!accept(p)) fail(Diag::syntax, peek().loc, std::string("expected '") + p + "'" + found());
  }
  std::string found() const {
    if (at_end()) return ", found end of statement";
    return ", found '" + peek().text + "'";
  }
  Token ident(const char* what) {
    if (peek().kind != Tok::ident) fail(Diag::syntax, peek().loc, std::string("expected ") + what + found());
    return t_[i_++];
  }
  Token number(const char* what) {
    if (peek().kind != Tok::number) fail(Diag::syntax, peek().loc, std::string("expected ") + what + found());
    return t_[i_++];
  }
  Token string(const char* what) {
    if (peek().kind != Tok::string) fail(Diag::syntax, peek().loc, std::string("expected ") + what + found());
    return t_[i_++];
  }
  void done() {
    if (!at_end()) fail(Diag::syntax, peek().loc, "unexpected '" + peek().text + "'");
  }

  TermAst term() {
    if (peek().kind == Tok::number) {
      auto n = number("term");
      return TermAst{"", n.value, {}, n.loc};
    }
    auto id = ident("term");
    TermAst t{id.text, 0, {}, id.loc};
    if (accept("(")) {
      do t.args.push_back(term());
      while (accept(","));
      expect(")");
    }
    return t;
  }

  FactAst fact() {
    auto id = ident("fact");
    FactAst f{id.text, {}, id.loc};
    if (accept("(")) {
      do f.args.push_back(term());
      while (accept(","));
      expect(")");
    }
    return f;
  }

  TimedFactAst timed_fact() {
    TimedFactAst tf;
    tf.loc = peek().loc;
    tf.fact = fact();
    expect("@");
    if (peek().kind == Tok::number) {
      tf.value = number("timestamp").value;
    } else if (accept("(")) {
      tf.tvar = ident("time variable").text;
      if (accept("+")) tf.value = number("offset").value;
      expect(")");
    } else {
      tf.tvar = ident("time variable or timestamp").text;
    }
    return tf;
  }

  std::vector<TimedFactAst> timed_list() {
    std::vector<TimedFactAst> v;
    do v.push_back(timed_fact());
    while (accept(","));
    return v;
  }

  ConstraintAst constraint() {
    ConstraintAst c;
    c.loc = peek().loc;
    c.lhs = ident("time variable").text;
    if (accept(">=")) c.op = ">=";
    else if (accept(">")) c.op = ">";
    else if (accept("=")) c.op = "=";
    else fail(Diag::syntax, peek().loc, "expected '>', '>=' or '='" + found());
    c.rhs = ident("time variable").text;
    if (accept("+")) {
      c.offset = static_cast<std::int64_t>(number("offset").value);
    } else if (accept("-")) {
      c.offset = -static_cast<std::int64_t>(number("offset").value);
    }
    return c;
  }

  std::vector<ConstraintAst> constraints() {
    std::vector<ConstraintAst> v;
    do v.push_back(constraint());
    while (accept(","));
    return v;
  }

  std::vector<std::string> sort_list() {
    std::vector<std::string> v;
    while (peek().kind == Tok::ident) {
      v.push_back(ident("sort").text);
      accept(",");
    }
    return v;
  }

  Stmt statement() {
    auto kw = ident("statement");
    const std::string& k = kw.text;
    if (k == "sort") {
      SortDecl d{{}, kw.loc};
      d.names = sort_list();
      if (d.names.empty()) fail(Diag::syntax, peek().loc, "expected sort name");
      done();
      return d;
    }
    if (k == "const" || k == "var") {
      std::vector<std::string> names;
      do {
        names.push_back(ident("name").text);
        accept(",");
      } while (peek().kind == Tok::ident);
      expect(":");
      std::string sort = ident("sort").text;
      done();
      if (k == "const") return ConstDecl{names, sort, kw.loc};
      return VarDecl{names, sort, kw.loc};
    }
    if (k == "fn") {
      FnDecl d{ident("function name").text, {}, "", kw.loc};
      expect(":");
      d.args = sort_list();
      expect("->");
      d.result = ident("result sort").text;
      done();
      return d;
    }
    if (k == "pred") {
      PredDecl d{ident("predicate name").text, {}, kw.loc};
      if (accept(":")) d.args = sort_list();
      done();
      return d;
    }
    if (k == "param") {
      ParamDecl d{ident("parameter name").text, 0, kw.loc};
      expect("=");
      d.value = number("value").value;
      done();
      return d;
    }
    if (k == "rule") {
      RuleDecl r{string("rule name").text, {}, {}, {}, kw.loc};
      expect(":");
      r.lhs = timed_list();
      if (accept("|")) r.guard = constraints();
      expect("->");
      r.rhs = timed_list();
      done();
      return r;
    }
    if (k == "init") {
      InitDecl d{{}, kw.loc};
      expect(":");
      if (!at_end()) d.facts = timed_list();
      done();
      return d;
    }
    if (k == "critical") {
      CriticalDecl c{string("critical pair name").text, {}, {}, kw.loc};
      expect(":");
      expect("{");
      c.facts = timed_list();
      if (accept("|")) c.constraints = constraints();
      expect("}");
      done();
      return c;
    }
    fail(Diag::syntax, kw.loc, "unknown statement '" + k + "'");
  }

 private:
  std::vector<Token> t_;
  std::size_t i_ = 0;
};

}  // namespace

SpecFile parse_spec(const std::string& text) {
  SpecFile out;
  std::vector<std::vector<Token>> stmts;
  bool header = false;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string raw = text.substr(start, nl == std::string::npos ? std::string::npos : nl - start);
    start = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string line = strip_comment(raw);
    bool blank = line.find_first_not_of(" \t") == std::string::npos;
    if (blank) continue;
    if (!header) {
      std::size_t a = line.find_first_not_of(" \t");
      std::size_t b = line.find_last_not_of(" \t");
      std::string h = line.substr(a, b - a + 1);
      if (h.rfind("timed-msr", 0) != 0)
        fail(Diag::header, Loc{line_no, static_cast<int>(a) + 1}, "expected header 'timed-msr 1'");
      std::string v = h.substr(9);
      v.erase(0, v.find_first_not_of(" \t"));
      if (v != "1")
        fail(Diag::header, Loc{line_no, static_cast<int>(a) + 1},
             "unsupported format version '" + v + "'");
      header = true;
      continue;
    }
    bool cont = std::isspace(static_cast<unsigned char>(line[0]));
    if (!cont || stmts.empty()) stmts.emplace_back();
    lex_line(line, line_no, stmts.back());
  }
  if (!header) fail(Diag::header, Loc{1, 1}, "expected header 'timed-msr 1'");
  for (auto& toks : stmts) {
    Parser p(std::move(toks));
    out.stmts.push_back(p.statement());
  }
  return out;
}

namespace {

void print_term(std::string& o, const TermAst& t) {
  if (t.name.empty()) {
    o += std::to_string(t.number);
    return;
  }
  o += t.name;
  if (t.args.empty()) return;
  o += '(';
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) o += ',';
    print_term(o, t.args[i]);
  }
  o += ')';
}

void print_fact(std::string& o, const FactAst& f) {
  o += f.pred;
  if (f.args.empty()) return;
  o += '(';
  for (std::size_t i = 0; i < f.args.size(); ++i) {
    if (i) o += ',';
    print_term(o, f.args[i]);
  }
  o += ')';
}

void print_timed(std::string& o, const std::vector<TimedFactAst>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) o += ", ";
    print_fact(o, v[i].fact);
    o += '@';
    if (v[i].tvar.empty()) o += std::to_string(v[i].value);
    else if (v[i].value == 0) o += v[i].tvar;
    else o += "(" + v[i].tvar + "+" + std::to_string(v[i].value) + ")";
  }
}

void print_constraints(std::string& o, const std::vector<ConstraintAst>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) o += ", ";
    o += v[i].lhs + " " + v[i].op + " " + v[i].rhs;
    if (v[i].offset > 0) o += " + " + std::to_string(v[i].offset);
    if (v[i].offset < 0) o += " - " + std::to_string(-v[i].offset);
  }
}

std::string join(const std::vector<std::string>& v) {
  std::string o;
  for (std::size_t i = 0; i < v.size(); ++i) o += (i ? " " : "") + v[i];
  return o;
}

struct Printer {
  std::string& o;
  void operator()(const SortDecl& d) { o += "sort " + join(d.names); }
  void operator()(const ConstDecl& d) { o += "const " + join(d.names) + " : " + d.sort; }
  void operator()(const VarDecl& d) { o += "var " + join(d.names) + " : " + d.sort; }
  void operator()(const FnDecl& d) {
    o += "fn " + d.name + " : " + join(d.args) + (d.args.empty() ? "-> " : " -> ") + d.result;
  }
  void operator()(const PredDecl& d) {
    o += "pred " + d.name;
    if (!d.args.empty()) o += " : " + join(d.args);
  }
  void operator()(const ParamDecl& d) { o += "param " + d.name + " = " + std::to_string(d.value); }
  void operator()(const RuleDecl& r) {
    o += "rule \"" + r.name + "\": ";
    print_timed(o, r.lhs);
    if (!r.guard.empty()) {
      o += " | ";
      print_constraints(o, r.guard);
    }
    o += " -> ";
    print_timed(o, r.rhs);
  }
  void operator()(const InitDecl& d) {
    o += "init:";
    if (!d.facts.empty()) o += " ";
    print_timed(o, d.facts);
  }
  void operator()(const CriticalDecl& c) {
    o += "critical \"" + c.name + "\": { ";
    print_timed(o, c.facts);
    if (!c.constraints.empty()) {
      o += " | ";
      print_constraints(o, c.constraints);
    }
    o += " }";
  }
};

}  // namespace

std::string print_spec(const SpecFile& f) {
  std::string o = "timed-msr " + std::to_string(f.version) + "\n";
  for (const auto& s : f.stmts) {
    std::visit(Printer{o}, s);
    o += '\n';
  }
  return o;
}

// Used by the loader's helpers for report re-ingestion.
namespace detail {

FactAst parse_fact_text(const std::string& text) {
  std::vector<Token> toks;
  lex_line(text, 1, toks);
  Parser p(std::move(toks));
  FactAst f = p.fact();
  p.done();
  return f;
}

TermAst parse_term_text(const std::string& text) {
  std::vector<Token> toks;
  lex_line(text, 1, toks);
  Parser p(std::move(toks));
  TermAst t = p.term();
  p.done();
  return t;
}

}  // namespace detail

}  // namespace tmsr
