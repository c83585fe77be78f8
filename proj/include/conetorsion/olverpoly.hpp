#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace conetorsion {

using Rational = boost::multiprecision::cpp_rational;

// Exact polynomial in t, optionally also in alpha.
class CoeffPolynomial {
 public:
  using Monomial = std::pair<int, int>;  // (power of t, power of alpha)

  CoeffPolynomial() = default;
  explicit CoeffPolynomial(const Rational& c);
  static CoeffPolynomial monomial(int t_pow, int alpha_pow, const Rational& c);

  bool has_alpha() const { return has_alpha_; }
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Rational coeff(int t_pow, int alpha_pow = 0) const;
  // Coefficient of t^p as a polynomial in alpha (stored with t-power 0).
  CoeffPolynomial t_coeff(int t_pow) const;
  std::vector<int> t_powers() const;
  int degree_t() const;
  int degree_alpha() const;

  CoeffPolynomial operator+(const CoeffPolynomial& o) const;
  CoeffPolynomial operator-(const CoeffPolynomial& o) const;
  CoeffPolynomial operator*(const CoeffPolynomial& o) const;
  CoeffPolynomial operator*(const Rational& c) const;
  CoeffPolynomial& operator+=(const CoeffPolynomial& o);
  CoeffPolynomial& operator-=(const CoeffPolynomial& o);
  bool operator==(const CoeffPolynomial& o) const;
  bool operator!=(const CoeffPolynomial& o) const { return !(*this == o); }

  CoeffPolynomial derivative_t() const;
  // Antiderivative in t vanishing at t = 0.
  CoeffPolynomial integral_t() const;
  // Replace alpha by c * alpha.
  CoeffPolynomial scale_alpha(const Rational& c) const;

  Rational eval_exact(const Rational& t, const Rational& alpha = 0) const;
  double eval(double t, double alpha = 0.0) const;
  // Human-readable form with "p/q" coefficients, e.g. "1/8*t^3 - 3/8*t".
  std::string to_string() const;

 private:
  void add_term(int t_pow, int alpha_pow, const Rational& c);
  std::map<Monomial, Rational> terms_;
  bool has_alpha_ = false;
};

std::string rational_string(const Rational& q);

int olver_max_order();
void set_olver_max_order(int r);

struct OlverPair {
  const CoeffPolynomial& u;
  const CoeffPolynomial& v;
};

OlverPair olver_pair(int r);
const CoeffPolynomial& olver_u(int r);
const CoeffPolynomial& olver_v(int r);

// Coefficient of nu^{-r} in log(1 + sum_j u_j(t) nu^{-j}).
const CoeffPolynomial& d_poly(int r);
// Coefficient of nu^{-r} in log(1 + sum_j (v_j(t) + alpha t u_{j-1}(t)) nu^{-j}).
const CoeffPolynomial& m_poly(int r);

// D_r(t) = sum_b x_{r,b} t^{r+2b}
Rational x_coeff(int r, int b);
// M_r(t, alpha) = sum_b z_{r,b}(alpha) t^{r+2b}
CoeffPolynomial z_coeff(int r, int b);

// sum_b (z_{r,b}(-alpha) - z_{r,b}(alpha)), as a polynomial in alpha.
CoeffPolynomial z_diff_sum_poly(int r);
double z_diff_sum(int r, double alpha);

// log(1 + sum g_j x^j) coefficients f_1..f_R, given g_1..g_R.
std::vector<CoeffPolynomial> formal_log(const std::vector<CoeffPolynomial>& g);

}  // namespace conetorsion
