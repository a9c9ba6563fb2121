#pragma once

/**
 * @file text.hpp
 * @brief Problem files (.mef): parser and deterministic printer.
 *
 *   file     := header decl*
 *   header   := "ring:" ringdesc "vars:" INT
 *   ringdesc := factor ("x" factor)*        factor := "Z" | "Z/" INT
 *   decl     := "const" NAME "=" expr | "fn" NAME "=" expr
 *
 * Expressions use + - * ^ and parentheses over integer literals, L,
 * g1..gr, constant names, product literals <e1, ..., es> and exponentials
 * L^(lin) with lin an integer-linear form in g1..gr plus a constant.
 * Division is only allowed by units, and this is checked syntactically:
 * the right operand of "/" is L^k, 1, or a parenthesized product of L^k,
 * (L^i - 1) and (L^i - L^j) factors, optionally raised to a power.
 *
 * Printing lists terms in key order, and parsing a printed value gives back
 * the same stored representation.
 */

#include "mef/exppoly.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mef {

class parse_error : public std::runtime_error {
 public:
  parse_error(int line, int column, const std::string& what)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct ProblemFile {
  RingDesc ring;
  std::size_t arity = 0;
  std::vector<std::pair<std::string, RingValue>> constants;
  std::vector<std::pair<std::string, ExpPoly>> functions;

  const ExpPoly& function(const std::string& name) const {
    for (const auto& [n, f] : functions)
      if (n == name) return f;
    throw usage_error("no function named '" + name + "'");
  }
};

// ---------------------------------------------------------------------------
// Printing

inline std::string format(const Poly& p) {
  std::string out;
  const auto& c = p.coefficients();
  for (std::size_t k = c.size(); k-- > 0;) {
    if (c[k] == 0) continue;
    std::string mono = k == 0 ? "" : k == 1 ? "L" : "L^" + std::to_string(k);
    std::string t;
    if (mono.empty()) t = c[k].str();
    else if (c[k] == 1) t = mono;
    else if (c[k] == -1) t = "-" + mono;
    else t = c[k].str() + "*" + mono;
    if (out.empty()) out = t;
    else if (t[0] == '-') out += " - " + t.substr(1);
    else out += " + " + t;
  }
  return out.empty() ? "0" : out;
}

inline std::string format(const UnitDenominator& d) {
  std::vector<std::string> f;
  if (d.sign < 0) f.push_back("(-1)");
  if (d.l_power == 1) f.push_back("L");
  else if (d.l_power > 1) f.push_back("L^" + std::to_string(d.l_power));
  for (const auto& [i, e] : d.binomials) {
    std::string s = i == 1 ? "(L-1)" : "(L^" + std::to_string(i) + "-1)";
    if (e > 1) s += "^" + std::to_string(e);
    f.push_back(s);
  }
  if (f.empty()) return "1";
  if (f.size() == 1) return f[0];
  std::string s = "(";
  for (std::size_t j = 0; j < f.size(); ++j) s += (j ? "*" : "") + f[j];
  return s + ")";
}

inline std::string format(const RingElem& x) {
  std::string num = format(x.numerator());
  if (x.denominator().is_one()) return num;
  std::size_t nonzero = 0;
  for (const auto& c : x.numerator().coefficients()) nonzero += c != 0;
  if (nonzero > 1) num = "(" + num + ")";
  return num + "/" + format(x.denominator());
}

inline std::string format(const RingValue& v) {
  if (v.parts().size() == 1) return format(v.parts()[0]);
  std::string s = "<";
  for (std::size_t j = 0; j < v.parts().size(); ++j) s += (j ? ", " : "") + format(v.parts()[j]);
  return s + ">";
}

namespace detail {

inline std::string format_linear(const std::vector<std::int64_t>& b) {
  std::string s;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i] == 0) continue;
    std::string var = "g" + std::to_string(i + 1);
    std::int64_t m = b[i] < 0 ? -b[i] : b[i];
    std::string t = m == 1 ? var : std::to_string(m) + "*" + var;
    if (s.empty()) s = b[i] < 0 ? "-" + t : t;
    else s += (b[i] < 0 ? " - " : " + ") + t;
  }
  return s;
}

inline bool needs_parens(const std::string& c) {
  return c.find('/') != std::string::npos || c.find(" + ") != std::string::npos ||
         c.find(" - ") != std::string::npos;
}

}  // namespace detail

inline std::string format(const TermKey& k) {
  std::string s = "(a=(";
  for (std::size_t i = 0; i < k.a.size(); ++i) s += (i ? "," : "") + std::to_string(k.a[i]);
  s += "), b=(";
  for (std::size_t i = 0; i < k.b.size(); ++i) s += (i ? "," : "") + std::to_string(k.b[i]);
  return s + "))";
}

inline std::string format(const ExpPoly& f) {
  std::string out;
  const bool single = f.ring().size() == 1;
  for (const auto& [k, c] : f.terms()) {
    std::vector<std::string> factors;
    for (std::size_t i = 0; i < k.a.size(); ++i) {
      if (k.a[i] == 0) continue;
      std::string g = "g" + std::to_string(i + 1);
      factors.push_back(k.a[i] == 1 ? g : g + "^" + std::to_string(k.a[i]));
    }
    std::string lin = detail::format_linear(k.b);
    if (!lin.empty()) factors.push_back("L^(" + lin + ")");
    std::string coef = format(c);
    std::string t;
    if (factors.empty()) {
      t = coef;
    } else {
      std::string body;
      for (std::size_t j = 0; j < factors.size(); ++j) body += (j ? "*" : "") + factors[j];
      if (single && coef == "1") t = body;
      else if (single && coef == "-1") t = "-" + body;
      else if (detail::needs_parens(coef)) t = "(" + coef + ")*" + body;
      else t = coef + "*" + body;
    }
    if (out.empty()) out = t;
    else if (t[0] == '-') out += " - " + t.substr(1);
    else out += " + " + t;
  }
  return out.empty() ? "0" : out;
}

inline std::string format(const ProblemFile& p) {
  std::string s = "ring: " + p.ring.to_string() + "\nvars: " + std::to_string(p.arity) + "\n";
  for (const auto& [n, v] : p.constants) s += "const " + n + " = " + format(v) + "\n";
  for (const auto& [n, f] : p.functions) s += "fn " + n + " = " + format(f) + "\n";
  return s;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

struct Token {
  enum Kind { Int, Ident, Sym, End } kind = End;
  std::string text;
  int line = 1;
  int col = 1;
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    unsigned char ch = static_cast<unsigned char>(src[i]);
    if (std::isspace(ch)) {
      advance(1);
      continue;
    }
    if (ch == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    std::size_t j = i;
    if (std::isdigit(ch)) {
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Token::Int;
    } else if (std::isalpha(ch) || ch == '_') {
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Token::Ident;
    } else if (std::string_view("+-*/^()<>,=:").find(static_cast<char>(ch)) != std::string_view::npos) {
      j = i + 1;
      t.kind = Token::Sym;
    } else {
      throw parse_error(line, col, std::string("unexpected character '") + static_cast<char>(ch) + "'");
    }
    t.text = std::string(src.substr(i, j - i));
    advance(j - i);
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

// Integer-linear form sum coef_i g_i + constant (exponents of L).
struct LinearForm {
  std::vector<Integer> coef;
  Integer constant = 0;

  bool is_constant() const {
    for (const auto& c : coef)
      if (c != 0) return false;
    return true;
  }
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  ProblemFile parse_file() {
    ProblemFile p;
    expect_ident("ring");
    expect_sym(":");
    p.ring = parse_ring();
    expect_ident("vars");
    expect_sym(":");
    const Token& n = expect_kind(Token::Int, "an integer arity");
    p.arity = static_cast<std::size_t>(to_int64(Integer(n.text)));
    ring_ = p.ring;
    arity_ = p.arity;
    std::map<std::string, int> seen;
    while (peek().kind != Token::End) {
      const Token& kw = peek();
      if (kw.kind != Token::Ident || (kw.text != "const" && kw.text != "fn"))
        fail(kw, "expected 'const' or 'fn' declaration");
      bool is_const = kw.text == "const";
      next();
      const Token& name = expect_kind(Token::Ident, "a name");
      if (reserved(name.text)) fail(name, "'" + name.text + "' is a reserved word");
      if (seen.count(name.text)) fail(name, "duplicate name '" + name.text + "'");
      seen[name.text] = 1;
      expect_sym("=");
      if (is_const) {
        std::size_t saved = arity_;
        arity_ = 0;
        ExpPoly v = parse_expr();
        arity_ = saved;
        constants_[name.text] = v.constant_value();
        p.constants.emplace_back(name.text, v.constant_value());
      } else {
        p.functions.emplace_back(name.text, parse_expr());
      }
    }
    if (p.functions.empty()) fail(peek(), "the file declares no function");
    return p;
  }

  /// A single expression of the given arity over the given ring.
  ExpPoly parse_standalone(const RingDesc& ring, std::size_t arity,
                           const std::map<std::string, RingValue>& constants = {}) {
    ring_ = ring;
    arity_ = arity;
    constants_ = constants;
    ExpPoly f = parse_expr();
    if (peek().kind != Token::End) fail(peek(), "unexpected '" + peek().text + "' after expression");
    return f;
  }

 private:
  static bool reserved(const std::string& s) {
    if (s == "L" || s == "g" || s == "const" || s == "fn" || s == "ring" || s == "vars") return true;
    if (s.size() > 1 && s[0] == 'g' && std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      return true;
    return false;
  }

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool is_sym(const char* s, std::size_t k = 0) const { return peek(k).kind == Token::Sym && peek(k).text == s; }
  bool is_ident(const char* s, std::size_t k = 0) const { return peek(k).kind == Token::Ident && peek(k).text == s; }

  [[noreturn]] static void fail(const Token& t, const std::string& msg) { throw parse_error(t.line, t.col, msg); }

  void expect_sym(const char* s) {
    if (!is_sym(s)) fail(peek(), std::string("expected '") + s + "'" + found());
    next();
  }
  void expect_ident(const char* s) {
    if (!is_ident(s)) fail(peek(), std::string("expected '") + s + "'" + found());
    next();
  }
  const Token& expect_kind(Token::Kind k, const char* what) {
    if (peek().kind != k) fail(peek(), std::string("expected ") + what + found());
    return next();
  }
  std::string found() const { return peek().kind == Token::End ? ", found end of input" : ", found '" + peek().text + "'"; }

  RingDesc parse_ring() {
    std::vector<Modulus> f;
    while (true) {
      expect_ident("Z");
      if (is_sym("/")) {
        next();
        const Token& m = expect_kind(Token::Int, "a modulus");
        Integer v(m.text);
        if (v == 0) fail(m, "modulus must be positive (write Z for the integers)");
        f.emplace_back(v);
      } else {
        f.emplace_back();
      }
      if (!is_ident("x")) break;
      next();
    }
    return RingDesc(std::move(f));
  }

  ExpPoly constant(const RingValue& v) const { return ExpPoly::constant(arity_, v); }

  ExpPoly parse_expr() {
    ExpPoly f = parse_term();
    while (is_sym("+") || is_sym("-")) {
      bool plus = next().text == "+";
      ExpPoly g = parse_term();
      f = plus ? f + g : f - g;
    }
    return f;
  }

  ExpPoly parse_term() {
    ExpPoly f = parse_unary();
    while (is_sym("*") || is_sym("/")) {
      if (next().text == "*") f = f * parse_unary();
      else f = f.scaled(parse_denominator_factor());
    }
    return f;
  }

  ExpPoly parse_unary() {
    if (is_sym("-")) {
      next();
      return -parse_unary();
    }
    return parse_power();
  }

  ExpPoly parse_power() {
    const Token start = peek();
    if (is_ident("L") && is_sym("^", 1)) {
      next();
      next();
      return parse_l_exponent(start);
    }
    ExpPoly base = parse_atom();
    if (!is_sym("^")) return base;
    next();
    std::int64_t n = parse_natural_exponent();
    ExpPoly r = constant(RingValue::one(ring_));
    for (std::int64_t k = 0; k < n; ++k) r = r * base;
    return r;
  }

  std::int64_t parse_natural_exponent() {
    bool paren = is_sym("(");
    if (paren) next();
    const Token& t = expect_kind(Token::Int, "a non-negative integer exponent");
    if (paren) expect_sym(")");
    return to_int64(Integer(t.text));
  }

  // After "L^": an integer, a variable, or a parenthesized linear form.
  ExpPoly parse_l_exponent(const Token& at) {
    LinearForm lin;
    lin.coef.assign(arity_, 0);
    if (is_sym("(")) {
      next();
      lin = parse_linear();
      expect_sym(")");
    } else if (is_sym("-")) {
      next();
      lin.constant = -Integer(expect_kind(Token::Int, "an integer exponent").text);
    } else if (peek().kind == Token::Int) {
      lin.constant = Integer(next().text);
    } else if (peek().kind == Token::Ident) {
      lin = linear_variable(next());
    } else {
      fail(peek(), "expected an exponent after 'L^'");
    }
    (void)at;
    std::vector<std::int64_t> slope;
    for (const auto& c : lin.coef) slope.push_back(to_int64(c));
    TermKey key(std::vector<std::int64_t>(arity_), std::move(slope));
    return ExpPoly::term(arity_, key, l_pow(ring_, to_int64(lin.constant)));
  }

  LinearForm linear_variable(const Token& t) {
    auto idx = variable_index(t);
    if (!idx) fail(t, "expected a variable g1..g" + std::to_string(arity_) + " in an exponent");
    LinearForm f;
    f.coef.assign(arity_, 0);
    f.coef[*idx] = 1;
    return f;
  }

  LinearForm parse_linear() {
    LinearForm f = parse_linear_term();
    while (is_sym("+") || is_sym("-")) {
      bool plus = next().text == "+";
      LinearForm g = parse_linear_term();
      for (std::size_t i = 0; i < arity_; ++i) f.coef[i] += plus ? g.coef[i] : -g.coef[i];
      f.constant += plus ? g.constant : -g.constant;
    }
    return f;
  }

  LinearForm parse_linear_term() {
    bool neg = false;
    while (is_sym("-")) {
      next();
      neg = !neg;
    }
    LinearForm f = parse_linear_factor();
    while (is_sym("*")) {
      const Token& at = next();
      LinearForm g = parse_linear_factor();
      if (!f.is_constant() && !g.is_constant()) fail(at, "exponent of L must be linear in g1..gr");
      if (f.is_constant()) std::swap(f, g);
      for (auto& c : f.coef) c *= g.constant;
      f.constant *= g.constant;
    }
    if (neg) {
      for (auto& c : f.coef) c = -c;
      f.constant = -f.constant;
    }
    return f;
  }

  LinearForm parse_linear_factor() {
    if (is_sym("(")) {
      next();
      LinearForm f = parse_linear();
      expect_sym(")");
      return f;
    }
    if (peek().kind == Token::Int) {
      LinearForm f;
      f.coef.assign(arity_, 0);
      f.constant = Integer(next().text);
      return f;
    }
    if (peek().kind == Token::Ident) return linear_variable(next());
    fail(peek(), "expected an integer or variable in the exponent" + found());
  }

  std::optional<std::size_t> variable_index(const Token& t) const {
    const std::string& s = t.text;
    if (s == "g" && arity_ == 1) return 0;
    if (s.size() < 2 || s[0] != 'g') return std::nullopt;
    for (std::size_t k = 1; k < s.size(); ++k)
      if (!std::isdigit(static_cast<unsigned char>(s[k]))) return std::nullopt;
    Integer n(s.substr(1));
    if (n < 1 || n > Integer(arity_)) {
      if (arity_ == 0) fail(t, "variables are not allowed here (constant context)");
      fail(t, "variable " + s + " exceeds the declared arity " + std::to_string(arity_));
    }
    return static_cast<std::size_t>(n) - 1;
  }

  ExpPoly parse_atom() {
    const Token& t = peek();
    if (t.kind == Token::Int) {
      next();
      return constant(RingValue::integer(ring_, Integer(t.text)));
    }
    if (is_sym("(")) {
      next();
      ExpPoly f = parse_expr();
      expect_sym(")");
      return f;
    }
    if (is_sym("<")) return parse_product_literal();
    if (t.kind == Token::Ident) {
      next();
      if (t.text == "L") return constant(l_pow(ring_, 1));
      if (t.text[0] == 'g') {
        if (auto idx = variable_index(t)) return ExpPoly::variable(arity_, ring_, *idx);
      }
      auto it = constants_.find(t.text);
      if (it == constants_.end()) fail(t, "unknown name '" + t.text + "'");
      if (factor_) return constant(project(it->second, *factor_));
      return constant(it->second);
    }
    fail(t, "expected an expression" + found());
  }

  ExpPoly parse_product_literal() {
    const Token& open = next();
    if (factor_) fail(open, "product literals cannot be nested");
    std::vector<RingElem> parts;
    const RingDesc full = ring_;
    const std::size_t saved_arity = arity_;
    while (true) {
      if (parts.size() >= full.size()) fail(peek(), "product literal has more entries than ring factors (" + std::to_string(full.size()) + ")");
      factor_ = parts.size();
      ring_ = RingDesc({full.factors[parts.size()]});
      arity_ = 0;
      ExpPoly e;
      try {
        e = parse_expr();
      } catch (...) {
        factor_.reset();
        ring_ = full;
        arity_ = saved_arity;
        throw;
      }
      parts.push_back(e.constant_value().part(0));
      factor_.reset();
      ring_ = full;
      arity_ = saved_arity;
      if (is_sym(",")) {
        next();
        continue;
      }
      break;
    }
    if (parts.size() != full.size())
      fail(open, "product literal has " + std::to_string(parts.size()) + " entries, ring has " + std::to_string(full.size()) + " factors");
    expect_sym(">");
    return constant(RingValue(std::move(parts)));
  }

  // Right operand of "/": returns the inverse of the (syntactic) unit.
  RingValue parse_denominator_factor() {
    const Token& t = peek();
    RingValue inv = RingValue::one(ring_);
    if (is_ident("L")) {
      next();
      std::int64_t k = 1;
      if (is_sym("^")) {
        next();
        k = parse_signed_int();
      }
      inv = l_pow(ring_, -k);
    } else if (t.kind == Token::Int) {
      if (Integer(t.text) != 1) fail(t, "integer " + t.text + " is not a unit; denominators must be products of L^k, (L^i - 1) and (L^i - L^j)");
      next();
    } else if (is_sym("(")) {
      next();
      inv = parse_denominator_inner();
      expect_sym(")");
    } else {
      fail(t, "denominators must be products of L^k, (L^i - 1) and (L^i - L^j)" + found());
    }
    if (is_sym("^")) {
      next();
      std::int64_t n = parse_natural_exponent();
      RingValue r = RingValue::one(ring_);
      for (std::int64_t k = 0; k < n; ++k) r *= inv;
      inv = r;
    }
    return inv;
  }

  RingValue parse_denominator_inner() {
    if (is_ident("L")) {
      const Token& at = next();
      std::int64_t i = 1;
      if (is_sym("^")) {
        next();
        i = parse_signed_int();
      }
      if (is_sym("-")) {
        next();
        std::int64_t j = 0;
        if (peek().kind == Token::Int && peek().text == "1") {
          next();
        } else if (is_ident("L")) {
          next();
          j = 1;
          if (is_sym("^")) {
            next();
            j = parse_signed_int();
          }
        } else {
          fail(peek(), "expected '1' or a power of L in a unit binomial (L^i - 1) or (L^i - L^j)" + found());
        }
        if (i == j) fail(at, "L^i - L^j with i = j is zero, not a unit");
        RingValue inv = invert_l_pow_diff(ring_, i, j);
        return continue_denominator_product(inv);
      }
      if (is_sym("+")) fail(peek(), "denominators must be products of L^k, (L^i - 1) and (L^i - L^j)");
      return continue_denominator_product(l_pow(ring_, -i));
    }
    return continue_denominator_product(parse_denominator_factor());
  }

  RingValue continue_denominator_product(RingValue inv) {
    while (is_sym("*")) {
      next();
      inv *= parse_denominator_factor();
    }
    if (is_sym("+") || is_sym("-")) fail(peek(), "denominators must be products of L^k, (L^i - 1) and (L^i - L^j)");
    return inv;
  }

  std::int64_t parse_signed_int() {
    bool neg = false;
    bool paren = is_sym("(");
    if (paren) next();
    if (is_sym("-")) {
      next();
      neg = true;
    }
    Integer v(expect_kind(Token::Int, "an integer").text);
    if (paren) expect_sym(")");
    return to_int64(neg ? Integer(-v) : v);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  RingDesc ring_;
  std::size_t arity_ = 0;
  std::map<std::string, RingValue> constants_;
  std::optional<std::size_t> factor_;
};

}  // namespace detail

inline ProblemFile parse(std::string_view text) { return detail::Parser(text).parse_file(); }

inline ExpPoly parse_function(std::string_view text, const RingDesc& ring, std::size_t arity,
                              const std::map<std::string, RingValue>& constants = {}) {
  return detail::Parser(text).parse_standalone(ring, arity, constants);
}

inline RingValue parse_value(std::string_view text, const RingDesc& ring) {
  return parse_function(text, ring, 0).constant_value();
}

inline RingDesc parse_ring(std::string_view text) {
  return parse(std::string("ring: ") + std::string(text) + "\nvars: 0\nfn _probe = 0\n").ring;
}

}  // namespace mef
