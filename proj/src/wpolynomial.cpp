#include "wpolynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace germfold {

WPolynomial WPolynomial::constant(int nvars, const Rational& c) {
  WPolynomial p(nvars);
  p.add_term(Monomial(nvars, 0), c);
  return p;
}

WPolynomial WPolynomial::var(int nvars, int index) {
  WPolynomial p(nvars);
  Monomial m(nvars, 0);
  m[index] = 1;
  p.add_term(m, Rational(1));
  return p;
}

void WPolynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  if (static_cast<int>(m.size()) != nvars_)
    fail(errc::internal, "MonomialArityMismatch");
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

static void require_same_nvars(const WPolynomial& a, const WPolynomial& b) {
  if (a.nvars() != b.nvars())
    fail(errc::bad_argument, "NvarsMismatch",
         std::to_string(a.nvars()) + " vs " + std::to_string(b.nvars()));
}

WPolynomial poly_add(const WPolynomial& a, const WPolynomial& b) {
  require_same_nvars(a, b);
  WPolynomial r = a;
  for (const auto& [m, c] : b.terms()) r.add_term(m, c);
  return r;
}

WPolynomial poly_sub(const WPolynomial& a, const WPolynomial& b) {
  require_same_nvars(a, b);
  WPolynomial r = a;
  for (const auto& [m, c] : b.terms()) r.add_term(m, -c);
  return r;
}

WPolynomial poly_mul(const WPolynomial& a, const WPolynomial& b) {
  require_same_nvars(a, b);
  WPolynomial r(a.nvars());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      Monomial m(a.nvars());
      for (int i = 0; i < a.nvars(); ++i) m[i] = ma[i] + mb[i];
      r.add_term(m, ca * cb);
    }
  }
  return r;
}

WPolynomial poly_scale(const WPolynomial& a, const Rational& r) {
  WPolynomial out(a.nvars());
  if (r == 0) return out;
  for (const auto& [m, c] : a.terms()) out.add_term(m, c * r);
  return out;
}

WPolynomial diff_poly(const WPolynomial& p, int var) {
  if (var < 0 || var >= p.nvars())
    fail(errc::bad_argument, "VariableIndexOutOfRange", std::to_string(var));
  WPolynomial r(p.nvars());
  for (const auto& [m, c] : p.terms()) {
    if (m[var] == 0) continue;
    Monomial d = m;
    d[var] -= 1;
    r.add_term(d, c * Rational(m[var]));
  }
  return r;
}

double eval_poly(const WPolynomial& p, const std::vector<double>& point) {
  if (static_cast<int>(point.size()) != p.nvars())
    fail(errc::bad_argument, "DimensionMismatch");
  // Cached power tables per variable keep the evaluation deterministic.
  std::vector<unsigned> maxe(p.nvars(), 0);
  for (const auto& [m, c] : p.terms())
    for (int i = 0; i < p.nvars(); ++i) maxe[i] = std::max(maxe[i], m[i]);
  std::vector<std::vector<double>> pow(p.nvars());
  for (int i = 0; i < p.nvars(); ++i) {
    pow[i].resize(maxe[i] + 1);
    pow[i][0] = 1.0;
    for (unsigned e = 1; e <= maxe[i]; ++e) pow[i][e] = pow[i][e - 1] * point[i];
  }
  double acc = 0.0;
  for (const auto& [m, c] : p.terms()) {
    double t = to_double(c);
    for (int i = 0; i < p.nvars(); ++i) t *= pow[i][m[i]];
    acc += t;
  }
  return acc;
}

Rational eval_exact(const WPolynomial& p, const std::vector<Rational>& point) {
  if (static_cast<int>(point.size()) != p.nvars())
    fail(errc::bad_argument, "DimensionMismatch");
  Rational acc(0);
  for (const auto& [m, c] : p.terms()) {
    Rational t = c;
    for (int i = 0; i < p.nvars(); ++i)
      if (m[i] > 0) t *= rational_pow(point[i], m[i]);
    acc += t;
  }
  return acc;
}

std::optional<long long> word(const WPolynomial& p,
                              const std::vector<int>& omega) {
  if (static_cast<int>(omega.size()) != p.nvars())
    fail(errc::bad_argument, "DimensionMismatch");
  if (p.is_zero()) return std::nullopt;
  long long best = -1;
  for (const auto& [m, c] : p.terms()) {
    long long d = 0;
    for (int i = 0; i < p.nvars(); ++i)
      d += static_cast<long long>(m[i]) * omega[i];
    if (best < 0 || d < best) best = d;
  }
  return best;
}

std::pair<bool, std::optional<long long>> is_weighted_homogeneous(
    const WPolynomial& p, const std::vector<int>& omega) {
  if (static_cast<int>(omega.size()) != p.nvars())
    fail(errc::bad_argument, "DimensionMismatch");
  if (p.is_zero()) return {true, std::nullopt};
  std::optional<long long> deg;
  for (const auto& [m, c] : p.terms()) {
    long long d = 0;
    for (int i = 0; i < p.nvars(); ++i)
      d += static_cast<long long>(m[i]) * omega[i];
    if (!deg) {
      deg = d;
    } else if (*deg != d) {
      return {false, std::nullopt};
    }
  }
  return {true, deg};
}

bool in_maximal_ideal_power(const WPolynomial& p, unsigned k) {
  for (const auto& [m, c] : p.terms()) {
    unsigned tot = 0;
    for (unsigned e : m) tot += e;
    if (tot < k) return false;
  }
  return true;
}

// ------------------------------------------------------------------- parser

namespace {

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& vars)
      : text_(text), vars_(vars) {}

  WPolynomial run() {
    WPolynomial p = expr();
    skip_ws();
    if (pos_ != text_.size())
      syntax("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  const std::string& text_;
  const std::vector<std::string>& vars_;
  size_t pos_ = 0;

  [[noreturn]] void syntax(const std::string& what) {
    fail(errc::validation, "SyntaxError",
         what + " at offset " + std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  WPolynomial expr() {
    skip_ws();
    bool neg = false;
    if (accept('-')) neg = true;
    else accept('+');
    WPolynomial acc = term();
    if (neg) acc = poly_scale(acc, Rational(-1));
    for (;;) {
      if (accept('+')) acc = poly_add(acc, term());
      else if (accept('-')) acc = poly_sub(acc, term());
      else break;
    }
    return acc;
  }

  WPolynomial term() {
    WPolynomial acc = factor();
    while (accept('*')) acc = poly_mul(acc, factor());
    return acc;
  }

  WPolynomial factor() {
    WPolynomial base = primary();
    if (accept('^')) {
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '-')
        fail(errc::validation, "NegativeExponent",
             "at offset " + std::to_string(pos_));
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        syntax("expected non-negative integer exponent");
      unsigned long long e = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        e = e * 10 + static_cast<unsigned long long>(text_[pos_] - '0');
        if (e > 1000000) syntax("exponent too large");
        ++pos_;
      }
      WPolynomial acc = WPolynomial::constant(base.nvars(), Rational(1));
      WPolynomial b = base;
      unsigned long long k = e;
      while (k > 0) {
        if (k & 1ULL) acc = poly_mul(acc, b);
        b = poly_mul(b, b);
        k >>= 1ULL;
      }
      return acc;
    }
    return base;
  }

  WPolynomial primary() {
    skip_ws();
    if (pos_ >= text_.size()) syntax("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      WPolynomial p = expr();
      if (!accept(')')) syntax("expected ')'");
      return p;
    }
    if (c == '-' || c == '+') {
      bool neg = c == '-';
      ++pos_;
      WPolynomial p = factor();
      return neg ? poly_scale(p, Rational(-1)) : p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return variable();
    syntax("unexpected character '" + std::string(1, c) + "'");
  }

  WPolynomial number() {
    BigInt num = read_integer();
    BigInt den = 1;
    if (pos_ < text_.size() && text_[pos_] == '/') {
      ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        syntax("expected denominator digits");
      den = read_integer();
      if (den == 0) syntax("zero denominator");
    }
    return WPolynomial::constant(static_cast<int>(vars_.size()),
                                 Rational(num, den));
  }

  BigInt read_integer() {
    BigInt v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      ++pos_;
    }
    return v;
  }

  WPolynomial variable() {
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string name = text_.substr(start, pos_ - start);
    for (size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] == name)
        return WPolynomial::var(static_cast<int>(vars_.size()),
                                static_cast<int>(i));
    }
    pos_ = start;
    fail(errc::validation, "UnknownVariable",
         "'" + name + "' at offset " + std::to_string(start));
  }
};

}  // namespace

WPolynomial parse_poly(const std::string& text,
                       const std::vector<std::string>& var_names) {
  return Parser(text, var_names).run();
}

std::string poly_str(const WPolynomial& p,
                     const std::vector<std::string>& var_names) {
  if (p.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    Rational a = c;
    if (first) {
      if (a < 0) {
        out << "-";
        a = -a;
      }
    } else {
      out << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    bool has_var = false;
    for (unsigned e : m) has_var = has_var || e > 0;
    bool coeff_shown = !has_var || a != 1;
    if (coeff_shown) out << rational_str(a);
    bool need_star = coeff_shown;
    for (size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (need_star) out << "*";
      out << var_names[i];
      if (m[i] > 1) out << "^" << m[i];
      need_star = true;
    }
  }
  return out.str();
}

}  // namespace germfold
