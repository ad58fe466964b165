#pragma once
#include "hz/util.hpp"

namespace hz {

// Disc-model isometry z -> (a z + b) / (conj(b) z + conj(a)), |a|^2 - |b|^2 = 1.
struct Moebius {
  cplx a{1.0, 0.0};
  cplx b{0.0, 0.0};

  Moebius() = default;
  Moebius(cplx a_, cplx b_);  // normalizes

  cplx apply(cplx z) const { return (a * z + b) / (std::conj(b) * z + std::conj(a)); }
  cplx derivative(cplx z) const {  // 1 / (conj(b) z + conj(a))^2
    cplx d = std::conj(b) * z + std::conj(a);
    return 1.0 / (d * d);
  }
  Moebius inverse() const { return Moebius(std::conj(a), -b); }
  double trace() const { return 2.0 * a.real(); }
  bool is_identity(double tol = 1e-12) const {
    return std::abs(a - 1.0) < tol && std::abs(b) < tol;
  }
  bool is_hyperbolic() const { return std::fabs(a.real()) > 1.0 + 1e-12; }

  static Moebius identity() { return Moebius(); }
  static Moebius rotation(double alpha) {
    return Moebius(std::polar(1.0, alpha / 2.0), cplx(0.0));
  }
};

Moebius compose(const Moebius& m1, const Moebius& m2);
double translation_length(const Moebius& m);
double boundary_derivative(const Moebius& m, double theta);
// (attracting, repelling) boundary angles
std::pair<double, double> fixed_points(const Moebius& m);
std::pair<cplx, double> isometric_circle(const Moebius& m);
double busemann(double xi, cplx z, cplx w);
double hyperbolic_distance(cplx z, cplx w);

}  // namespace hz
