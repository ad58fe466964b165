#pragma once
#include "hz/transfer.hpp"

namespace hz {

enum class ZetaMethod { euler, orbit_det, matrix_det };

struct ZetaValue {
  cplx s;
  cplx value;
  ZetaMethod method = ZetaMethod::euler;
  // truncation metadata (whichever applies to the method)
  double L_max = 0.0;
  int k_max = 0, p_max = 0, n_cap = 0, N = 0;
  double h = 0.0;
  double error_bound = 0.0;
  bool converged = true;
};

// one primitive geodesic class as seen through the coding
struct ClassData {
  double ell = 0.0;
  double ell_rho = 0.0;
  int word_len = 0;
  std::vector<cplx> eig;  // eigenvalues of rho(gamma)
  bool overcounted = false;
};

struct ZetaClassSet {
  std::vector<ClassData> classes;      // deduplicated primitive classes
  std::vector<ClassData> overcounted;  // extra coding classes double-covering a geodesic
  int n_cap = 0;
};

// deduplicated primitive classes with rho(gamma) spectra, cached per (coding, rep)
const ZetaClassSet& zeta_classes(const MarkovCoding& coding, const LinearRep* rep,
                                 int n_cap = 7);

// critical exponent of the rep (pressure root), cached
double rep_delta(const MarkovCoding& coding, const LinearRep* rep);

// Z'/Z truncated at total geodesic length L_max; requires Re s > delta + 0.2
cplx log_derivative_series(cplx s, const LinearRep* rep, const MarkovCoding& coding,
                           double L_max, double* tail_bound = nullptr,
                           bool* converged = nullptr);

ZetaValue euler_product(cplx s, const LinearRep* rep, const MarkovCoding& coding,
                        double L_max, int k_max = 64);

// tr L^n_{s,rho}: exact finite sum over closed n-cylinders
cplx transfer_trace_orbit(cplx s, const LinearRep* rep, const MarkovCoding& coding, int n);

// det(I - L) = exp(-sum_p tr L^p / p); requires Re s > delta + 0.2
ZetaValue fredholm_det_orbit(cplx s, const LinearRep* rep, const MarkovCoding& coding,
                             int p_max);

// det(I - M_N(s)) from the collocation discretization
ZetaValue fredholm_det_matrix(cplx s, const LinearRep* rep, const MarkovCoding& coding,
                              double h, int N);

// product over flagged duplicate classes: det(I - L) = Z * overcount_correction
cplx overcount_correction(cplx s, const LinearRep* rep, const MarkovCoding& coding);

// geometric side of the heat trace: identity term + Gaussian class sum
cplx heat_trace_geometric(double t, const LinearRep* rep, const MarkovCoding& coding,
                          double L_max);

// |Z(s) - Z(1-s) exp(dim Vol int_0^{s-1/2} r tan(pi r) dr)| / |Z(s)|
double functional_equation_residual(cplx s, const LinearRep* rep, const MarkovCoding& coding,
                                    double h, int N, bool deform = true);

}  // namespace hz
