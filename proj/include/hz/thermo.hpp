#pragma once
#include "hz/coding.hpp"

namespace hz {

// phi = c_psi * psi + c_tau * tau, where tau = log|T'| and psi is the Busemann
// weight of the deformation; for the identity deformation psi == tau.
struct WeightSpec {
  double c_psi = 0.0;
  double c_tau = 0.0;
  const LinearRep* deformation = nullptr;  // rep whose boundary map defines psi
};

struct PressureEstimate {
  double value = 0.0;
  std::vector<std::pair<int, double>> per_level;  // (n, (1/n) log S_n)
  double error_bound = 0.0;
  int n_used = 0;
};

struct StretchResult {
  double i_minus = 1.0, i_plus = 1.0;
  int n_max = 0;
};

// phi^{(n)}(x-) for a closed cylinder: c_psi * ell_rho + c_tau * ell, both exact
double weight_on_orbit(const Cylinder& cyl, const WeightSpec& spec);

// Birkhoff sum of psi along the orbit of the cylinder's base point, evaluated
// numerically from the Busemann closed form with boundary map F = conjugator;
// on closed words this reproduces ell_rho (the pressure-weight identity)
double busemann_weight_sum(const MarkovCoding& coding, const LinearRep& rep,
                           const std::vector<int>& word);

// e^{P(phi)} = lim_n (sum_{T^n x = x} e^{phi^{(n)}(x)})^{1/n}, accelerated
PressureEstimate pressure(const MarkovCoding& coding, const LinearRep* rep,
                          const WeightSpec& spec, int n_max);

// unique zero of sigma -> P(beta psi - sigma tau); doubled solves
// P(2 beta psi - 2 sigma tau) = 0 instead
double critical_exponent(const MarkovCoding& coding, const LinearRep* rep, double beta,
                         bool doubled = false, int n_max = 10);

// points (a, b(a)) with P(-a psi - b tau) = 0
std::vector<std::pair<double, double>> manhattan_curve(const MarkovCoding& coding,
                                                       const LinearRep* rep,
                                                       const std::vector<double>& a_grid,
                                                       int n_max = 10);

// I_-/I_+ = inf/sup of ell_rho / ell over primitive classes up to n_max
StretchResult geodesic_stretch(const MarkovCoding& coding, const LinearRep* rep, int n_max);

// closed-orbit length histogram for one level n (bin 1e-5, mean-length
// representative), disk-cached; S_n(c) = sum_i count_i e^{c ell_i}
struct LenHist {
  std::vector<double> ell;
  std::vector<double> count;
};
const LenHist& closed_length_histogram(const MarkovCoding& coding, int n);

}  // namespace hz
