#pragma once

#include "conetorsion/olverpoly.hpp"

#include <vector>

namespace conetorsion {

// Gamma(a, x) for real a and x > 0.
double upper_gamma(double a, double x);

// Harmonic number H_m as an exact rational.
Rational harmonic_number(int m);

// psi(r) = -gamma + H_{r-1} for integer r >= 1.
double digamma_int(int r);

long long binomial(int n, int k);

// Compensated sum in the given order.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

}  // namespace conetorsion
