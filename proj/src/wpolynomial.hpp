#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rational.hpp"

namespace germfold {

// Exponent vector; length always equals the owning polynomial's nvars.
using Monomial = std::vector<unsigned>;

// Sparse multivariate polynomial with exact rational coefficients.
// Invariant: no zero coefficients are stored.
class WPolynomial {
 public:
  explicit WPolynomial(int nvars) : nvars_(nvars) {}

  static WPolynomial constant(int nvars, const Rational& c);
  static WPolynomial var(int nvars, int index);  // 0-based

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, Rational>& terms() const { return terms_; }

  // Adds c * x^m into the term map, dropping the entry if it cancels.
  void add_term(const Monomial& m, const Rational& c);

 private:
  int nvars_;
  std::map<Monomial, Rational> terms_;
};

WPolynomial poly_add(const WPolynomial& a, const WPolynomial& b);
WPolynomial poly_sub(const WPolynomial& a, const WPolynomial& b);
WPolynomial poly_mul(const WPolynomial& a, const WPolynomial& b);
WPolynomial poly_scale(const WPolynomial& a, const Rational& r);

// Exact partial derivative with respect to variable `var` (0-based).
WPolynomial diff_poly(const WPolynomial& p, int var);

double eval_poly(const WPolynomial& p, const std::vector<double>& point);
Rational eval_exact(const WPolynomial& p, const std::vector<Rational>& point);

// Minimum weighted degree over stored monomials; nullopt encodes the
// zero polynomial's order infinity.
std::optional<long long> word(const WPolynomial& p,
                              const std::vector<int>& omega);

// True iff every stored monomial has the same weighted degree, returned as
// second member (nullopt for the zero polynomial).
std::pair<bool, std::optional<long long>> is_weighted_homogeneous(
    const WPolynomial& p, const std::vector<int>& omega);

// Total-degree lower bound check: every monomial has degree >= k.
bool in_maximal_ideal_power(const WPolynomial& p, unsigned k);

// Parses the expression grammar: integer/rational literals, named variables,
// + - * ^ and parentheses; implicit multiplication is a syntax error.
WPolynomial parse_poly(const std::string& text,
                       const std::vector<std::string>& var_names);

// Canonical rendering; parse_poly(poly_str(p)) reproduces the term map.
std::string poly_str(const WPolynomial& p,
                     const std::vector<std::string>& var_names);

}  // namespace germfold
