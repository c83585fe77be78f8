#pragma once

namespace conetorsion {

// I_nu, I'_nu, K_nu, K'_nu at a point. When scaled, the I pair carries e^{-x}
// and the K pair carries e^{x}.
struct BesselQuad {
  double i_val = 0.0;
  double i_prime = 0.0;
  double k_val = 0.0;
  double k_prime = 0.0;
  bool scaled = false;
};

constexpr double kBesselMaxOrder = 1e4;
constexpr double kBesselMaxUnscaledArg = 700.0;

BesselQuad modified_bessel(double nu, double x, bool scaled = false);

// Leading small-argument forms; nu must be positive.
BesselQuad small_argument_leading(double nu, double z);

enum class BesselKind { I, IPrime, K, KPrime };

struct UniformValue {
  double value = 0.0;
  double truncation = 0.0;  // magnitude of the first omitted term
};

// Olver expansion of the chosen function at argument nu*z, summing the
// corrections r = 0..terms.
UniformValue uniform_expansion(BesselKind kind, double nu, double z, int terms);

}  // namespace conetorsion
