#pragma once
#include "hz/zeta.hpp"

namespace hz {

// closed region right of the parabola x = sigma(1-sigma) + y^2/(1-2 sigma)^2;
// sigma = 1/2 degenerates to the ray [1/4, infinity)
struct ParabolicRegion {
  double sigma = 0.5;
};

cplx s_to_lambda(cplx s);  // lambda = s(1-s)
bool parabola_contains(const ParabolicRegion& region, cplx lam);

struct ZeroEntry {
  cplx s;
  cplx lambda;  // s(1-s)
  int multiplicity = 1;
  bool winding_confirmed = false;
  double residual = 0.0;   // |det| at the refined point
  bool ambiguous = false;  // near a non-positive integer (possible trivial-zero overlap)
};

struct ScanRect {
  double sigma_min = 0.0, sigma_max = 0.0, t_min = 0.0, t_max = 0.0;
};

struct ZeroList {
  std::vector<ZeroEntry> zeros;
  ScanRect rect;           // provenance: the scanned rectangle
  int total_winding = 0;   // winding of det around the full rectangle
  void merge(const ZeroEntry& e);  // dedupe within 1e-6 (keeps max multiplicity)
};

// argument-principle scan of det(I-L)/overcount for zeros inside rect
ZeroList zero_scan(const LinearRep* rep, const MarkovCoding& coding, const ScanRect& rect,
                   double h, int N, int grid = 3);

// M_sigma(r) = #{lambda outside C_sigma : r <= |lambda| <= r + sqrt(r)}
int count_windows(const ZeroList& zeros, double sigma, double r);

struct WeylReport {
  double T = 0.0;
  int observed = 0;
  double predicted = 0.0;  // dim * Vol/(4 pi) * T
  double ratio = 0.0;
};

WeylReport weyl_compare(const ZeroList& zeros, const LinearRep* rep,
                        const MarkovCoding& coding, double T);

// N_f(r_tilde) <= (mean of log|f| on the radius-r circle - log|f(center)|) / log(r/r_tilde)
double jensen_count_bound(const std::vector<double>& log_abs_on_circle,
                          double log_abs_center, double r, double r_tilde);

struct HSReport {
  double S1 = 0.0;          // diagonal part: doubled-weight periodic sum at level n
  double S2 = 0.0;          // shallow-depth (off-diagonal) share of the HS integral
  double hs_norm_sq = 0.0;  // ||L^{n/2}||_HS^2 from numeric tube Bergman kernels
  double slack = 0.0;       // discretization gap to the matrix Frobenius bound
  double log_det = 0.0;     // log|det(I - M(s)^n)|
};

// Hilbert-Schmidt diagnostics of the determinant bound; n must be even
HSReport hs_diagnostic(const LinearRep* rep, const MarkovCoding& coding, cplx s, double h,
                       int n);

}  // namespace hz
