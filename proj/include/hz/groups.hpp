#pragma once
#include <Eigen/Dense>
#include <array>
#include <optional>
#include <vector>

#include "hz/moebius.hpp"

namespace hz {

// Labels 0..4g-1; label+2g is the inverse of label (mod 4g).
struct GroupPreset {
  int genus = 2;
  std::vector<Moebius> gens;        // indexed by label, size 4g
  std::vector<int> inverse_label;   // involution
  std::vector<int> relator;         // word in labels, evaluates to identity
  std::vector<cplx> polygon_vertices;

  const Moebius& gen(int label) const {
    if (label < 0 || label >= (int)gens.size()) throw UnknownLabel("bad label");
    return gens[label];
  }
  std::uint64_t hash() const;
  void validate() const;  // relator residual, hyperbolicity, inverse pairing
};

enum class RepKind { trivial, adjoint, spin, sym_power, direct_sum, conjugate_deformation, custom };

struct LinearRep {
  int dim = 1;
  double beta = 0.0;
  std::vector<Eigen::MatrixXcd> images;  // per label
  RepKind kind = RepKind::trivial;
  std::optional<Moebius> deformation;    // conjugator c; boundary map F = c on S^1
  std::uint64_t preset_hash = 0;

  const Eigen::MatrixXcd& image(int label) const { return images[label]; }
  Eigen::MatrixXcd evaluate(const std::vector<int>& word) const;
  void validate(const GroupPreset& p) const;  // relator -> I_d, inverse pairing
};

struct CharacterRow {
  std::vector<int> word;
  double ell = 0.0;
  double ell_rho = 0.0;
  cplx trace{0.0, 0.0};
};

GroupPreset octagon_preset();
std::pair<Moebius, Eigen::MatrixXcd> evaluate_word(const GroupPreset& p, const LinearRep& rep,
                                                   const std::vector<int>& word);
Moebius evaluate_word_map(const GroupPreset& p, const std::vector<int>& word);

LinearRep trivial_rep(const GroupPreset& p);
LinearRep adjoint_rep(const GroupPreset& p);
// signs indexed by free generator (labels 0..2g-1)
LinearRep spin_lift(const GroupPreset& p, const std::vector<int>& signs);
std::vector<std::vector<int>> spin_structures(const GroupPreset& p);  // all valid sign vectors
LinearRep sym_power_rep(const GroupPreset& p, int n, const std::vector<int>* signs = nullptr);
LinearRep direct_sum(const std::vector<LinearRep>& reps);
LinearRep conjugate_deformation(const GroupPreset& p, const Moebius& c);

// deformed length: translation length of c g c^-1 (equals ell for Moebius conjugation)
double ell_rho_of(const GroupPreset& p, const LinearRep& rep, const Moebius& g);

// SU(1,1) -> SL(2,R) Cayley conjugation (real part taken; imaginary residual checked)
Eigen::Matrix2d su11_to_sl2r(const Moebius& m);

// JSON load/save of preset + representation (schema documented in README)
GroupPreset load_preset_json(const std::string& path);
std::pair<GroupPreset, LinearRep> load_group_file(const std::string& path);
void save_group_file(const std::string& path, const GroupPreset& p, const LinearRep& rep);

}  // namespace hz
