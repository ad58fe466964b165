#pragma once
#include <vector>

#include "hz/util.hpp"

#include <Eigen/Dense>

namespace hz {

// bounded simply connected domain with a quadrature rule over its interior
struct PlanarDomain {
  enum class Kind { disc, moebius_image_of_disc, tube, polygon };
  Kind kind = Kind::disc;
  // disc
  cplx center{0.0, 0.0};
  double radius = 1.0;
  // moebius_image_of_disc: image of the unit disc under m(z) = (ma z + mb)/(mc z + md)
  cplx ma{1.0, 0.0}, mb{0.0, 0.0}, mc{0.0, 0.0}, md{1.0, 0.0};
  // tube: annular sector {r e^{i theta}: theta in [theta_lo, theta_hi], |r-1| <= h}
  double theta_lo = 0.0, theta_hi = 0.0, h = 0.0;
  // polygon
  std::vector<cplx> vertices;

  double area = 0.0;
  std::vector<cplx> qnode;
  std::vector<double> qweight;

  std::vector<cplx> boundary(int M) const;  // M parameterized boundary points
};

PlanarDomain make_disc(cplx center, double radius, int nr = 84, int ntheta = 180);
PlanarDomain make_moebius_disc(cplx a, cplx b, cplx c, cplx d, int nr = 84,
                               int ntheta = 180);
PlanarDomain make_tube(double theta_lo, double theta_hi, double h, int gl_order = 12);
PlanarDomain make_polygon(std::vector<cplx> vertices, int refine = 24);

// closed forms on the unit disc
cplx disc_kernel(cplx z, cplx w);          // 1/(pi (1 - z conj(w))^2)
double disc_density(cplx z);               // lambda(z) = 2/(1-|z|^2)
double disc_distance(cplx z, cplx w);      // hyperbolic distance for the density above

// kernel from a Gram-orthonormalized polynomial basis under the domain quadrature
struct KernelApprox {
  const PlanarDomain* domain = nullptr;
  int N_b = 0;
  cplx center{0.0, 0.0};  // basis recentering (tube spine midpoint etc.)
  double scale = 1.0;
  Eigen::MatrixXcd coef;  // phi_l = sum_a coef(a,l) ((z-center)/scale)^a

  cplx eval(cplx z, cplx w) const;
  void basis_at(cplx z, Eigen::VectorXcd& out) const;
};

KernelApprox numeric_kernel(const PlanarDomain& domain, int N_b);

// sup over M_b^2 boundary pairs of the log cross-ratio
double apollonian(const PlanarDomain& domain, cplx x, cplx y, int M_b = 1000);

struct TubeBoundReport {
  std::vector<double> h;
  std::vector<double> diag_sup;     // sup_{depth >= c h} h^2 |B(z,z)|
  std::vector<double> offdiag_sup;  // sup_{|z-w| >= c h^nu} |B(z,w)|
  std::vector<int> basis_used;
  double diag_ratio = 0.0;          // max/min of diag_sup
  double offdiag_slope = 0.0;       // fit of log offdiag_sup vs log h
};

TubeBoundReport tube_bound_check(double theta_lo, double theta_hi,
                                 const std::vector<double>& h_list, double c, double nu);

}  // namespace hz
