#pragma once
#include <functional>
#include <string>

#include "hz/groups.hpp"

namespace hz {

struct CodingReport {
  int k = 0;
  double markov_residual_max = 0.0;
  double expansion_one_step = 0.0;   // min sampled |T'|
  double expansion_two_step = 0.0;   // min sampled |(T^2)'|
  int mixing_exponent = 0;           // p0 with A^p0 > 0
  double lambda1 = 0.0;              // spectral radius of A (word growth)
  double cover_gap_max = 0.0;        // largest uncovered/overlap defect (must be ~0)
  int n0 = 0;                        // first depth with guaranteed half-width-deep images
  double h_max = 0.0;
  bool ok = false;
  std::string detail;
};

struct MarkovCoding {
  const GroupPreset* preset = nullptr;
  int k = 0;
  std::vector<double> pts;          // sorted arc endpoints; arc j = [pts[j], pts[j+1 mod k])
  std::vector<int> branch_of;       // arc j -> generator label applied by T
  std::vector<std::vector<int>> succ;   // succ[j] = sorted targets i with A(j,i)=1
  std::vector<std::vector<char>> A;     // k x k transition matrix
  double D = 0.0;                   // two-step expansion bound
  int p0 = 0;
  int n0 = 0;
  double h_max = 0.0;
  std::vector<double> width_weight;  // per-arc tube half-width multiplier, <= 1
  CodingReport report;
  std::uint64_t preset_hash = 0;

  double arc_lo(int j) const { return pts[j]; }
  double arc_hi(int j) const { return pts[(j + 1) % k]; }
  double arc_mid(int j) const { return norm_angle(pts[j] + 0.5 * arc_len(pts[j], arc_hi(j))); }
  int arc_of(double theta) const;              // index of arc containing theta
  double T_apply(double theta) const;          // the boundary map
  double T_derivative(double theta) const;     // |T'(theta)|
  Moebius inverse_branch(int j) const {        // v_j with v_j(T x) = x on I_j
    return preset->gen(preset->inverse_label[branch_of[j]]);
  }
  std::uint64_t hash() const;
};

struct Cylinder {
  std::vector<int> word;       // arc indices, admissible
  Moebius g;                   // composed inverse branch g_alpha
  double x_minus = 0.0;        // attracting fixed point angle (closed words)
  double deriv_at_fixed = 0.0; // |g'(x-)|
  double ell = 0.0;            // -log|g'(x-)| for closed words
  double ell_rho = 0.0;
  int primitive_period = 0;
};

struct PrimitiveClass {
  Cylinder cyl;
  int multiplicity = 1;        // how many T-orbit classes share this geodesic
  bool duplicate = false;      // true on all but the first member of a duplicate group
  bool endpoint_anchored = false;
  int dup_group = -1;
};

struct SeparationReport {
  int n_max = 0;
  std::vector<std::pair<int, double>> min_by_n;  // (n, min separation)
  double c1_hat = 0.0, theta2_hat = 0.0;
};

struct DiameterReport {
  int n = 0;
  double min_diam = 0.0, max_diam = 0.0, sum_diam = 0.0;
  std::vector<std::pair<int, double>> min_by_n;
  double theta0_hat = 0.0;  // fitted lower-envelope ratio
};

MarkovCoding build_bowen_series(const GroupPreset& preset);

// min over edges (j,i) of (h*w_j - sup dist(v_j(boundary of U_i), I_j)); > 0 means
// every one-step inverse-branch image lands strictly inside its target tube
double tube_inclusion_margin(const MarkovCoding& coding, double h);

// true if g1 = u g2 u^-1 for some word u of length <= max_len in the preset generators
bool conjugate_in_group(const GroupPreset& p, const Moebius& g1, const Moebius& g2,
                        int max_len);

// deterministic lexicographic stream; rep may be null (ell_rho = ell then)
void enumerate_cylinders(const MarkovCoding& coding, const LinearRep* rep, int n,
                         bool closed_only, const std::function<void(const Cylinder&)>& sink,
                         int cap = 12);

std::vector<PrimitiveClass> primitive_classes(const MarkovCoding& coding, const LinearRep* rep,
                                              int n_max);

SeparationReport separation_check(const MarkovCoding& coding, int n);
DiameterReport cylinder_diameters(const MarkovCoding& coding, int n);

std::vector<CharacterRow> character_table(const GroupPreset& p, const LinearRep& rep,
                                          const MarkovCoding& coding, int n_max);

// binary on-disk cache of closed cylinders, keyed by (preset hash, n)
std::string cache_dir();
std::vector<Cylinder> closed_cylinders_cached(const MarkovCoding& coding, int n);

}  // namespace hz
