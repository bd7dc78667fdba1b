#include "dlambda/text.hpp"

#include <cctype>
#include <variant>

#include "dlambda/errors.hpp"

namespace dlambda {

std::string format_rational(const Rational& c) {
  if (c.get_den() == 1) return c.get_num().get_str();
  std::string s = "(" + Rational(abs(c)).get_str() + ")";
  return sgn(c) < 0 ? "-" + s : s;
}

std::string format_monomial(const Monomial& m, const VarTable& vars) {
  std::string out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (!m[i]) continue;
    if (!out.empty()) out += '*';
    out += vars.name(i);
    if (m[i] > 1) out += "^" + std::to_string(m[i]);
  }
  return out;
}

namespace {

// Term body without its sign.
std::string term_body(const Monomial& m, const Rational& abs_c, const VarTablePtr& vars) {
  if (m.is_one()) return format_rational(abs_c);
  std::string mono = format_monomial(m, *vars);
  if (abs_c == 1) return mono;
  return format_rational(abs_c) + "*" + mono;
}

bool single_negative(const RatFunc& f) { return f.num().size() == 1 && sgn(f.num().leading().second) < 0; }

std::string format_den(const Denominator& d, const VarTablePtr& vars) {
  std::vector<std::string> parts;
  bool lone_base = false;
  if (!d.mono.is_one()) parts.push_back(format_monomial(d.mono, *vars));
  for (const auto& f : d.factors) {
    std::string b = "(" + format_poly(f.base) + ")";
    if (f.exp > 1) b += "^" + std::to_string(f.exp);
    parts.push_back(b);
  }
  if (parts.size() == 1 && d.mono.is_one() && d.factors[0].exp == 1) lone_base = true;
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "*" : "") + parts[i];
  return lone_base ? out : "(" + out + ")";
}

}  // namespace

std::string format_poly(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    bool neg = sgn(c) < 0;
    if (first) {
      out += neg ? "-" : "";
    } else {
      out += neg ? " - " : " + ";
    }
    out += term_body(m, abs(c), p.vars());
    first = false;
  }
  return out;
}

std::string format_ratfunc(const RatFunc& f) {
  if (f.is_polynomial()) return format_poly(f.num());
  return "(" + format_poly(f.num()) + ")/" + format_den(f.den_factored(), f.vars());
}

std::string format_diffop(const DiffOp& a) {
  if (a.is_zero()) return "0";
  const VarTable& vars = *a.vars();
  std::string out;
  bool first = true;
  for (const auto& [idx, c] : a.terms()) {
    bool neg = single_negative(c);
    RatFunc body = neg ? -c : c;
    std::string derivs;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (!idx[i]) continue;
      if (!derivs.empty()) derivs += ' ';
      derivs += "d/d" + vars.name(i);
      if (idx[i] > 1) derivs += "^" + std::to_string(idx[i]);
    }
    std::string coeff = format_ratfunc(body);
    if (body.is_polynomial() && body.num().size() > 1 && !derivs.empty()) coeff = "(" + coeff + ")";
    std::string t;
    if (derivs.empty()) {
      t = coeff;
    } else if (body.constant_value() && *body.constant_value() == 1) {
      t = derivs;
    } else {
      t = coeff + " * " + derivs;
    }
    if (first) {
      out += (neg ? "-" : "") + t;
    } else {
      out += (neg ? " - " : " + ") + t;
    }
    first = false;
  }
  return out;
}

std::string format_section(const PowerSection& s) {
  std::string out = format_ratfunc(s.prefactor());
  if (s.prefactor().num().size() > 1 && s.prefactor().is_polynomial()) out = "(" + out + ")";
  for (const auto& f : s.factors()) {
    std::string base = format_poly(f.base);
    if (f.base.size() > 1) base = "(" + base + ")";
    std::string e = format_poly(f.exponent.poly());
    if (f.exponent.poly().size() > 1 || (f.exponent.poly().size() == 1 && !f.exponent.poly().is_constant() &&
                                         f.exponent.poly().leading().second != 1) ||
        e.front() == '-')
      e = "(" + e + ")";
    out += " * " + base + "^" + e;
  }
  return out;
}

namespace {

enum class Tok { End, Number, Ident, Deriv, Plus, Minus, Star, Slash, Caret, LParen, RParen };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) { advance(); }
  const Token& peek() const { return cur_; }
  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  void advance() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    std::size_t start = i_;
    if (i_ >= s_.size()) {
      cur_ = {Tok::End, "", start};
      return;
    }
    char c = s_[i_];
    if (c == 'd' && s_.substr(i_, 3) == "d/d" && i_ + 3 < s_.size() && ident_start(s_[i_ + 3])) {
      i_ += 3;
      std::size_t b = i_;
      while (i_ < s_.size() && ident_char(s_[i_])) ++i_;
      cur_ = {Tok::Deriv, std::string(s_.substr(b, i_ - b)), start};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      cur_ = {Tok::Number, std::string(s_.substr(start, i_ - start)), start};
      return;
    }
    if (ident_start(c)) {
      while (i_ < s_.size() && ident_char(s_[i_])) ++i_;
      cur_ = {Tok::Ident, std::string(s_.substr(start, i_ - start)), start};
      return;
    }
    ++i_;
    switch (c) {
      case '+': cur_ = {Tok::Plus, "+", start}; return;
      case '-': cur_ = {Tok::Minus, "-", start}; return;
      case '*': cur_ = {Tok::Star, "*", start}; return;
      case '/': cur_ = {Tok::Slash, "/", start}; return;
      case '^': cur_ = {Tok::Caret, "^", start}; return;
      case '(': cur_ = {Tok::LParen, "(", start}; return;
      case ')': cur_ = {Tok::RParen, ")", start}; return;
      default: throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
  }

  std::string_view s_;
  std::size_t i_ = 0;
  Token cur_{Tok::End, "", 0};
};

using Value = std::variant<RatFunc, DiffOp>;

class Parser {
 public:
  Parser(std::string_view s, VarTablePtr vars, ChartPtr chart) : lex_(s), vars_(std::move(vars)), chart_(std::move(chart)) {}

  Value parse_all() {
    Value v = expr();
    if (lex_.peek().kind != Tok::End) throw ParseError("unexpected '" + lex_.peek().text + "'", lex_.peek().pos);
    return v;
  }

 private:
  DiffOp as_op(const Value& v) {
    if (auto* a = std::get_if<DiffOp>(&v)) return *a;
    return DiffOp::scalar(chart_, std::get<RatFunc>(v));
  }

  Value add(const Value& a, const Value& b, bool minus) {
    if (a.index() == 0 && b.index() == 0) {
      const auto& x = std::get<RatFunc>(a);
      const auto& y = std::get<RatFunc>(b);
      return minus ? x - y : x + y;
    }
    return minus ? as_op(a) - as_op(b) : as_op(a) + as_op(b);
  }

  Value mul(const Value& a, const Value& b) {
    if (a.index() == 0 && b.index() == 0) return std::get<RatFunc>(a) * std::get<RatFunc>(b);
    if (a.index() == 0) return std::get<RatFunc>(a) * std::get<DiffOp>(b);
    return op_compose(std::get<DiffOp>(a), as_op(b));
  }

  Value expr() {
    Value v = term();
    while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
      bool minus = lex_.take().kind == Tok::Minus;
      v = add(v, term(), minus);
    }
    return v;
  }

  bool starts_factor(Tok k) const {
    return k == Tok::Number || k == Tok::Ident || k == Tok::Deriv || k == Tok::LParen;
  }

  Value term() {
    Value v = unary();
    while (true) {
      Tok k = lex_.peek().kind;
      if (k == Tok::Star) {
        lex_.take();
        v = mul(v, unary());
      } else if (k == Tok::Slash) {
        std::size_t pos = lex_.take().pos;
        Value d = unary();
        if (v.index() != 0 || d.index() != 0) throw ParseError("only functions can be divided", pos);
        v = std::get<RatFunc>(v) / std::get<RatFunc>(d);
      } else if (k == Tok::Deriv && v.index() == 1) {
        // Juxtaposed derivative factors: "d/dx d/dy".
        v = mul(v, power());
      } else {
        return v;
      }
    }
  }

  Value unary() {
    if (lex_.peek().kind == Tok::Minus) {
      lex_.take();
      Value v = unary();
      if (auto* f = std::get_if<RatFunc>(&v)) return -*f;
      return -std::get<DiffOp>(v);
    }
    return power();
  }

  long exponent() {
    bool neg = false;
    if (lex_.peek().kind == Tok::Minus) {
      lex_.take();
      neg = true;
    }
    bool paren = false;
    if (lex_.peek().kind == Tok::LParen) {
      lex_.take();
      paren = true;
      if (lex_.peek().kind == Tok::Minus) {
        lex_.take();
        neg = !neg;
      }
    }
    Token t = lex_.take();
    if (t.kind != Tok::Number) throw ParseError("expected an integer exponent", t.pos);
    if (t.text.size() > 6) throw ParseError("exponent too large", t.pos);
    if (paren) expect(Tok::RParen, ")");
    long e = std::stol(t.text);
    return neg ? -e : e;
  }

  Value power() {
    Value base = atom();
    if (lex_.peek().kind != Tok::Caret) return base;
    std::size_t pos = lex_.take().pos;
    long e = exponent();
    if (auto* f = std::get_if<RatFunc>(&base)) return f->pow(static_cast<int>(e));
    if (e < 0) throw ParseError("negative power of an operator", pos);
    return op_power(std::get<DiffOp>(base), static_cast<unsigned>(e));
  }

  void expect(Tok k, const char* what) {
    if (lex_.peek().kind != k) throw ParseError(std::string("expected '") + what + "'", lex_.peek().pos);
    lex_.take();
  }

  Value atom() {
    Token t = lex_.take();
    switch (t.kind) {
      case Tok::Number:
        return RatFunc::constant(vars_, Rational(Integer(t.text)));
      case Tok::Ident: {
        auto i = vars_->find(t.text);
        if (!i) throw ParseError("unknown variable '" + t.text + "'", t.pos);
        return RatFunc(Poly::variable(vars_, *i));
      }
      case Tok::Deriv: {
        if (!chart_) throw ParseError("derivative in a function expression", t.pos);
        auto i = vars_->find(t.text);
        if (!i) throw ParseError("unknown variable '" + t.text + "'", t.pos);
        if (vars_->is_parameter(*i)) throw ParseError("cannot differentiate parameter '" + t.text + "'", t.pos);
        return DiffOp::partial(chart_, *i);
      }
      case Tok::LParen: {
        Value v = expr();
        expect(Tok::RParen, ")");
        return v;
      }
      default:
        throw ParseError(t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'", t.pos);
    }
  }

  Lexer lex_;
  VarTablePtr vars_;
  ChartPtr chart_;
};

}  // namespace

RatFunc parse_ratfunc(std::string_view text, const VarTablePtr& vars) {
  Value v = Parser(text, vars, nullptr).parse_all();
  return std::get<RatFunc>(v);
}

Poly parse_poly(std::string_view text, const VarTablePtr& vars) {
  RatFunc f = parse_ratfunc(text, vars);
  auto p = f.as_poly();
  if (!p) throw ParseError("expression is not a polynomial", 0);
  return *p;
}

DiffOp parse_diffop(std::string_view text, const ChartPtr& chart) {
  Value v = Parser(text, chart->vars, chart).parse_all();
  if (auto* a = std::get_if<DiffOp>(&v)) return *a;
  return DiffOp::scalar(chart, std::get<RatFunc>(v));
}

}  // namespace dlambda
