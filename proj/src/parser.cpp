#include "cqoa/parser.hpp"

#include <cctype>
#include <optional>
#include <sstream>

namespace cqoa {

namespace {

class Parser {
 public:
  Parser(const std::string& src, Engine& engine) : src_(src), engine_(&engine) {}
  explicit Parser(const std::string& src) : src_(src), engine_(nullptr) {}

  FieldExpr parse_full_expr() {
    FieldExpr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return e;
  }

  Coefficient parse_full_scalar() {
    auto c = parse_scalar();
    if (!c) fail("expected a scalar value");
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return *c;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  std::optional<std::string> try_identifier() {
    skip_ws();
    std::size_t p = pos_;
    if (p >= src_.size() || !(std::isalpha(static_cast<unsigned char>(src_[p])) || src_[p] == '_'))
      return std::nullopt;
    std::size_t q = p;
    while (q < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[q])) || src_[q] == '_'))
      ++q;
    pos_ = q;
    return src_.substr(p, q - p);
  }

  std::optional<Int> try_integer() {
    skip_ws();
    std::size_t p = pos_;
    if (p >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[p])))
      return std::nullopt;
    std::size_t q = p;
    while (q < src_.size() && std::isdigit(static_cast<unsigned char>(src_[q]))) ++q;
    pos_ = q;
    return Int(src_.substr(p, q - p));
  }

  // ---- scalar layer -------------------------------------------------------

  std::optional<Coefficient> parse_scalar() {
    std::size_t save = pos_;
    auto first = parse_scalar_term();
    if (!first) {
      pos_ = save;
      return std::nullopt;
    }
    Coefficient acc = *first;
    for (;;) {
      std::size_t mark = pos_;
      if (eat('+')) {
        auto t = parse_scalar_term();
        if (!t) {
          pos_ = mark;
          break;
        }
        acc += *t;
      } else if (eat('-')) {
        auto t = parse_scalar_term();
        if (!t) {
          pos_ = mark;
          break;
        }
        acc -= *t;
      } else {
        break;
      }
    }
    return acc;
  }

  std::optional<Coefficient> parse_scalar_term() {
    std::size_t save = pos_;
    auto first = parse_scalar_factor();
    if (!first) {
      pos_ = save;
      return std::nullopt;
    }
    Coefficient acc = *first;
    for (;;) {
      std::size_t mark = pos_;
      if (eat('*')) {
        auto f = parse_scalar_factor();
        if (!f) {
          pos_ = mark;
          break;
        }
        acc *= f.value();
      } else if (eat('/')) {
        auto f = parse_scalar_factor();
        if (!f) {
          pos_ = mark;
          break;
        }
        if (f->is_zero()) fail("division by zero");
        acc = acc / *f;
      } else {
        break;
      }
    }
    return acc;
  }

  std::optional<Coefficient> parse_scalar_factor() {
    std::size_t save = pos_;
    Coefficient base;
    if (eat('-')) {
      auto f = parse_scalar_factor();
      if (!f) {
        pos_ = save;
        return std::nullopt;
      }
      return -*f;
    }
    if (auto n = try_integer()) {
      base = Coefficient(Rational(*n));
    } else if (peek() == '(') {
      eat('(');
      auto inner = parse_scalar();
      if (!inner || !eat(')')) {
        pos_ = save;
        return std::nullopt;
      }
      base = *inner;
    } else {
      std::size_t mark = pos_;
      auto id = try_identifier();
      if (id && *id == "kappa") {
        base = Coefficient::kappa();
      } else {
        pos_ = mark;
        return std::nullopt;
      }
    }
    if (eat('^')) {
      auto e = try_integer();
      if (!e) fail("expected integer exponent");
      Coefficient acc = Coefficient::one();
      for (Int i = 0; i < *e; ++i) acc *= base;
      base = acc;
    }
    return base;
  }

  // ---- field layer --------------------------------------------------------

  FieldExpr parse_expr() {
    bool neg = false;
    skip_ws();
    if (eat('-')) neg = true;
    FieldExpr acc = parse_term();
    if (neg) acc = -acc;
    for (;;) {
      if (eat('+')) {
        acc += parse_term();
      } else if (eat('-')) {
        acc += -parse_term();
      } else {
        break;
      }
    }
    return acc;
  }

  FieldExpr parse_term() {
    std::size_t save = pos_;
    auto scalar = parse_scalar();
    if (scalar) {
      std::size_t after = pos_;
      if (eat('*')) {
        std::size_t mark = pos_;
        try {
          return parse_factor().scaled(*scalar);
        } catch (const ParseError&) {
          pos_ = mark;
        }
        pos_ = after;
      }
      // scalar-only term == scalar * identity
      char next = peek();
      if (next == '\0' || next == '+' || next == '-' || next == ')' || next == ':')
        return FieldExpr::monomial(algebra(), WickMonomial{}, *scalar);
      pos_ = save;
    }
    return parse_factor();
  }

  FieldExpr parse_factor() {
    skip_ws();
    if (eat('(')) {
      FieldExpr e = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (eat(':')) {
      std::vector<FieldExpr> factors;
      while (peek() != ':' && peek() != '\0') factors.push_back(parse_factor());
      if (!eat(':')) fail("expected closing ':'");
      if (factors.empty()) fail("empty normal-ordered group");
      FieldExpr acc = factors.back();
      for (std::size_t i = factors.size() - 1; i-- > 0;) acc = engine_->wick(factors[i], acc);
      return acc;
    }
    std::size_t save = pos_;
    if (auto n = try_integer()) {
      if (*n == 1) return FieldExpr::identity(algebra());
      pos_ = save;
      fail("expected an expression factor");
    }
    auto id = try_identifier();
    if (!id) fail("expected an expression factor");
    if (*id == "kappa") fail("'kappa' is a scalar, not a field");
    if ((*id)[0] == 'd' && (id->size() == 1 || std::isdigit(static_cast<unsigned char>((*id)[1])))) {
      bool looks_like_derivative = true;
      int order = 1;
      if (id->size() > 1) {
        try {
          order = std::stoi(id->substr(1));
        } catch (...) {
          looks_like_derivative = false;
        }
      }
      if (looks_like_derivative && peek() == '(') {
        eat('(');
        FieldExpr inner = parse_expr();
        if (!eat(')')) fail("expected ')'");
        return engine_->derivative(inner, order);
      }
    }
    try {
      int gi = algebra()->generator_index(*id);
      return FieldExpr::generator(algebra(), gi);
    } catch (const std::invalid_argument&) {
      pos_ = save;
      fail("unknown generator '" + *id + "'");
    }
  }

  const AlgebraSpec* algebra() const { return &engine_->algebra(); }

  const std::string& src_;
  std::size_t pos_ = 0;
  Engine* engine_;
};

}  // namespace

FieldExpr parse_expr(const std::string& src, Engine& engine) {
  return Parser(src, engine).parse_full_expr();
}

Coefficient parse_coefficient(const std::string& src) {
  return Parser(src).parse_full_scalar();
}

std::string render_monomial(const WickMonomial& m, const AlgebraSpec& a) {
  if (m.is_identity()) return "1";
  auto factor_str = [&a](const FieldTerm& f) {
    const std::string& name = a.gen(f.generator).name;
    if (f.derivative_order == 0) return name;
    if (f.derivative_order == 1) return "d(" + name + ")";
    return "d" + std::to_string(f.derivative_order) + "(" + name + ")";
  };
  if (m.size() == 1) return factor_str(m.factors.front());
  std::string out = ":";
  for (std::size_t i = 0; i < m.factors.size(); ++i) {
    if (i) out += " ";
    out += factor_str(m.factors[i]);
  }
  out += ":";
  return out;
}

std::string render(const FieldExpr& e) {
  if (e.is_zero()) return "0";
  const AlgebraSpec& a = *e.algebra();
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : e.terms()) {
    Coefficient coef = c;
    bool negative = false;
    if (coef.is_rational() && coef.rational_value() < 0) {
      negative = true;
      coef = -coef;
    }
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    std::string ms = render_monomial(m, a);
    if (coef == Coefficient::one()) {
      os << ms;
    } else if (m.is_identity()) {
      os << coef.to_string();
    } else {
      os << coef.to_string() << "*" << ms;
    }
  }
  return os.str();
}

}  // namespace cqoa
