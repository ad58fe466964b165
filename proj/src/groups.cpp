#include "hz/groups.hpp"

#include <fstream>

#include "json.hpp"

namespace hz {

using Eigen::Matrix2d;
using Eigen::MatrixXcd;

std::uint64_t GroupPreset::hash() const {
  std::uint64_t h = fnv1a(&genus, sizeof genus);
  for (const auto& g : gens) {
    double d[4] = {g.a.real(), g.a.imag(), g.b.real(), g.b.imag()};
    h = fnv1a(d, sizeof d, h);
  }
  for (int r : relator) h = fnv1a(&r, sizeof r, h);
  return h;
}

void GroupPreset::validate() const {
  int n = 4 * genus;
  if ((int)gens.size() != n) throw DomainError("preset: wrong generator count");
  for (int i = 0; i < n; ++i) {
    if (!gens[i].is_hyperbolic()) throw DomainError("preset: generator not hyperbolic");
    Moebius prod = compose(gens[i], gens[inverse_label[i]]);
    if (!prod.is_identity(1e-10)) throw DomainError("preset: inverse pairing broken");
  }
  Moebius r = Moebius::identity();
  for (int lab : relator) r = compose(r, gens[lab]);
  if (!r.is_identity(1e-9)) throw DomainError("preset: relator does not evaluate to identity");
}

GroupPreset octagon_preset() {
  GroupPreset p;
  p.genus = 2;
  double a0 = 1.0 + std::sqrt(2.0);
  double b0 = std::sqrt(2.0 + 2.0 * std::sqrt(2.0));
  for (int k = 0; k < 8; ++k) {
    cplx ph = std::polar(1.0, k * TWO_PI / 8.0);
    p.gens.emplace_back(cplx(a0, 0.0), b0 * ph);
    p.inverse_label.push_back((k + 4) % 8);
  }
  // g0 g1^-1 g2 g3^-1 g0^-1 g1 g2^-1 g3 = id
  p.relator = {0, 5, 2, 7, 4, 1, 6, 3};
  // regular octagon vertices sit between consecutive side centers
  double rv = std::sqrt(std::sqrt(2.0) - 1.0) * std::pow(2.0, 0.25) / std::sqrt(2.0);
  // vertex radius from cosh d(0,v) relation; recompute robustly below instead
  (void)rv;
  // vertices = intersection of adjacent isometric circles, at angles (k+1/2)*pi/4
  for (int k = 0; k < 8; ++k) {
    auto [c, r] = isometric_circle(p.gens[(k + 4) % 8]);
    auto [c2, r2] = isometric_circle(p.gens[(k + 5) % 8]);
    // intersect circles |z-c|=r, |z-c2|=r2, pick the point inside the unit disc
    cplx d = c2 - c;
    double L = std::abs(d);
    double x = (L * L + r * r - r2 * r2) / (2.0 * L);
    double y2 = r * r - x * x;
    double y = y2 > 0 ? std::sqrt(y2) : 0.0;
    cplx e = d / L;
    cplx perp(-e.imag(), e.real());
    cplx v1 = c + x * e + y * perp;
    cplx v2 = c + x * e - y * perp;
    p.polygon_vertices.push_back(std::abs(v1) < std::abs(v2) ? v1 : v2);
  }
  p.validate();
  return p;
}

Moebius evaluate_word_map(const GroupPreset& p, const std::vector<int>& word) {
  Moebius m = Moebius::identity();
  for (int lab : word) m = compose(m, p.gen(lab));
  return m;
}

MatrixXcd LinearRep::evaluate(const std::vector<int>& word) const {
  MatrixXcd m = MatrixXcd::Identity(dim, dim);
  for (int lab : word) {
    if (lab < 0 || lab >= (int)images.size()) throw UnknownLabel("bad label in word");
    m = m * images[lab];
  }
  return m;
}

void LinearRep::validate(const GroupPreset& p) const {
  if ((int)images.size() != (int)p.gens.size()) throw DomainError("rep: wrong image count");
  MatrixXcd r = evaluate(p.relator);
  if ((r - MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-8)
    throw DomainError("rep: relator image not identity");
  for (size_t i = 0; i < images.size(); ++i) {
    MatrixXcd prod = images[i] * images[p.inverse_label[i]];
    if ((prod - MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-10)
      throw DomainError("rep: inverse images inconsistent");
  }
}

std::pair<Moebius, MatrixXcd> evaluate_word(const GroupPreset& p, const LinearRep& rep,
                                            const std::vector<int>& word) {
  return {evaluate_word_map(p, word), rep.evaluate(word)};
}

LinearRep trivial_rep(const GroupPreset& p) {
  LinearRep r;
  r.dim = 1;
  r.beta = 0.0;
  r.kind = RepKind::trivial;
  r.preset_hash = p.hash();
  r.images.assign(p.gens.size(), MatrixXcd::Identity(1, 1));
  return r;
}

Eigen::Matrix2d su11_to_sl2r(const Moebius& m) {
  // K = (1/sqrt2) [[1, i],[i, 1]];  g = K^-1 M K is real for M in SU(1,1)
  cplx a = m.a, b = m.b;
  Eigen::Matrix2cd M;
  M << a, b, std::conj(b), std::conj(a);
  Eigen::Matrix2cd K, Ki;
  const cplx I(0.0, 1.0);
  double s = 1.0 / std::sqrt(2.0);
  K << s, I * s, I * s, s;
  Ki << s, -I * s, -I * s, s;
  Eigen::Matrix2cd g = Ki * M * K;
  if (g.imag().cwiseAbs().maxCoeff() > 1e-10)
    throw DomainError("su11_to_sl2r: conversion left imaginary residue");
  return g.real();
}

static Eigen::Matrix3d adjoint_matrix(const Matrix2d& g) {
  // basis (Y0, Y1, Y2): Y0=[[0,1],[0,0]], Y1=[[0,0],[1,0]], Y2=diag(1,-1)
  double P = g(0, 0), q = g(0, 1), r = g(1, 0), t = g(1, 1);
  Eigen::Matrix3d ad;
  ad << P * P, -q * q, -2 * P * q,
      -r * r, t * t, 2 * r * t,
      -P * r, q * t, P * t + q * r;
  return ad;
}

LinearRep adjoint_rep(const GroupPreset& p) {
  LinearRep r;
  r.dim = 3;
  r.beta = 1.0;
  r.kind = RepKind::adjoint;
  r.preset_hash = p.hash();
  for (const auto& g : p.gens) r.images.push_back(adjoint_matrix(su11_to_sl2r(g)).cast<cplx>());
  r.validate(p);
  return r;
}

// SL2 lift with positive trace, as the SU(1,1)-form complex 2x2 matrix
static Eigen::Matrix2cd positive_trace_lift(const Moebius& m) {
  Eigen::Matrix2cd M;
  M << m.a, m.b, std::conj(m.b), std::conj(m.a);
  if (M.trace().real() < 0) M = -M;
  return M;
}

LinearRep spin_lift(const GroupPreset& p, const std::vector<int>& signs) {
  int ng = 2 * p.genus;
  if ((int)signs.size() != ng) throw MissingSpinStructure("spin_lift: need 2g signs");
  LinearRep r;
  r.dim = 2;
  r.beta = 0.5;
  r.kind = RepKind::spin;
  r.preset_hash = p.hash();
  r.images.resize(p.gens.size());
  for (int i = 0; i < ng; ++i) {
    if (signs[i] != 1 && signs[i] != -1) throw DomainError("spin_lift: signs must be +-1");
    Eigen::Matrix2cd L = double(signs[i]) * positive_trace_lift(p.gens[i]);
    r.images[i] = L;
    r.images[p.inverse_label[i]] = L.inverse();
  }
  Eigen::MatrixXcd rel = r.evaluate(p.relator);
  if ((rel - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-8)
    throw InconsistentSpinStructure("spin_lift: signed relator is -I");
  return r;
}

std::vector<std::vector<int>> spin_structures(const GroupPreset& p) {
  int ng = 2 * p.genus;
  std::vector<std::vector<int>> out;
  for (int mask = 0; mask < (1 << ng); ++mask) {
    std::vector<int> s(ng);
    for (int i = 0; i < ng; ++i) s[i] = (mask >> i) & 1 ? -1 : 1;
    try {
      spin_lift(p, s);
      out.push_back(s);
    } catch (const InconsistentSpinStructure&) {
    }
  }
  return out;
}

// n-th symmetric tensor power of a 2x2 matrix, basis x^{n-j} y^j
static MatrixXcd sym_power_matrix(const Eigen::Matrix2cd& M, int n) {
  MatrixXcd S = MatrixXcd::Zero(n + 1, n + 1);
  cplx a = M(0, 0), b = M(0, 1), c = M(1, 0), d = M(1, 1);
  for (int j = 0; j <= n; ++j) {
    // column j: coefficients of (a x + c y)^{n-j} (b x + d y)^j
    std::vector<cplx> poly(n + 1, 0.0);
    poly[0] = 1.0;
    int deg = 0;
    auto mul = [&](cplx cx, cplx cy) {
      std::vector<cplx> q(deg + 2, 0.0);
      for (int t = 0; t <= deg; ++t) {
        q[t] += cx * poly[t];
        q[t + 1] += cy * poly[t];
      }
      ++deg;
      for (int t = 0; t <= deg; ++t) poly[t] = q[t];
    };
    for (int t = 0; t < n - j; ++t) mul(a, c);
    for (int t = 0; t < j; ++t) mul(b, d);
    for (int i = 0; i <= n; ++i) S(i, j) = poly[i];
  }
  return S;
}

LinearRep sym_power_rep(const GroupPreset& p, int n, const std::vector<int>* signs) {
  if (n < 1) throw DomainError("sym_power_rep: n >= 1 required");
  if (n % 2 == 1 && !signs) throw MissingSpinStructure("sym_power_rep: odd n needs a spin structure");
  LinearRep base;
  if (n % 2 == 1) {
    base = spin_lift(p, *signs);
  } else {
    base.dim = 2;
    base.images.resize(p.gens.size());
    for (size_t i = 0; i < p.gens.size(); ++i) base.images[i] = positive_trace_lift(p.gens[i]);
  }
  LinearRep r;
  r.dim = n + 1;
  r.beta = n / 2.0;
  r.kind = RepKind::sym_power;
  r.preset_hash = p.hash();
  for (size_t i = 0; i < p.gens.size(); ++i) {
    Eigen::Matrix2cd M = base.images[i];
    if (n % 2 == 0) {
      // even n: sign ambiguity of the lift cancels; use positive-trace lift directly
      M = positive_trace_lift(p.gens[i]);
    }
    r.images.push_back(sym_power_matrix(M, n));
  }
  // even-n inverses come from lifts that may not be matrix inverses of each other
  // ((-I)^n = I makes the rep well defined); rebuild inverse images exactly
  for (size_t i = 0; i < p.gens.size(); ++i) {
    size_t j = p.inverse_label[i];
    if (j > i) r.images[j] = r.images[i].inverse();
  }
  r.validate(p);
  return r;
}

LinearRep direct_sum(const std::vector<LinearRep>& reps) {
  if (reps.empty()) throw DomainError("direct_sum: empty list");
  for (const auto& r : reps)
    if (r.preset_hash != reps[0].preset_hash) throw MixedPresets("direct_sum: mixed presets");
  LinearRep out;
  out.kind = RepKind::direct_sum;
  out.preset_hash = reps[0].preset_hash;
  out.dim = 0;
  out.beta = 0.0;
  for (const auto& r : reps) {
    out.dim += r.dim;
    out.beta = std::max(out.beta, r.beta);
  }
  size_t nlab = reps[0].images.size();
  for (size_t l = 0; l < nlab; ++l) {
    MatrixXcd m = MatrixXcd::Zero(out.dim, out.dim);
    int off = 0;
    for (const auto& r : reps) {
      m.block(off, off, r.dim, r.dim) = r.images[l];
      off += r.dim;
    }
    out.images.push_back(m);
  }
  return out;
}

LinearRep conjugate_deformation(const GroupPreset& p, const Moebius& c) {
  LinearRep r = trivial_rep(p);
  r.kind = RepKind::conjugate_deformation;
  r.deformation = c;
  return r;
}

double ell_rho_of(const GroupPreset&, const LinearRep& rep, const Moebius& g) {
  if (!rep.deformation) return translation_length(g);
  const Moebius& c = *rep.deformation;
  return translation_length(compose(compose(c, g), c.inverse()));
}

// ---- JSON I/O ----

using nlohmann::json;

static GroupPreset preset_from_json(const json& j) {
  GroupPreset p;
  p.genus = j.at("genus").get<int>();
  p.gens.clear();
  p.inverse_label.clear();
  for (const auto& g : j.at("generators")) {
    p.gens.emplace_back(cplx(g.at("a_re").get<double>(), g.at("a_im").get<double>()),
                        cplx(g.at("b_re").get<double>(), g.at("b_im").get<double>()));
  }
  int n = (int)p.gens.size();
  for (int i = 0; i < n; ++i) p.inverse_label.push_back((i + 2 * p.genus) % n);
  p.relator = j.at("relator").get<std::vector<int>>();
  p.validate();
  return p;
}

GroupPreset load_preset_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open " + path);
  json j;
  f >> j;
  return preset_from_json(j);
}

std::pair<GroupPreset, LinearRep> load_group_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open " + path);
  json j;
  f >> j;
  GroupPreset p = preset_from_json(j);
  LinearRep rep = trivial_rep(p);
  if (j.contains("representation")) {
    const auto& jr = j["representation"];
    std::string kind = jr.at("kind").get<std::string>();
    if (kind == "trivial") {
      rep = trivial_rep(p);
    } else if (kind == "adjoint") {
      rep = adjoint_rep(p);
    } else if (kind == "spin") {
      rep = spin_lift(p, jr.at("signs").get<std::vector<int>>());
    } else if (kind == "sym_power") {
      int n = jr.at("n").get<int>();
      if (jr.contains("signs")) {
        auto s = jr.at("signs").get<std::vector<int>>();
        rep = sym_power_rep(p, n, &s);
      } else {
        rep = sym_power_rep(p, n);
      }
    } else if (kind == "conjugate_deformation") {
      const auto& jc = jr.at("conjugator");
      Moebius c(cplx(jc.at("a_re").get<double>(), jc.at("a_im").get<double>()),
                cplx(jc.at("b_re").get<double>(), jc.at("b_im").get<double>()));
      rep = conjugate_deformation(p, c);
    } else if (kind == "custom") {
      rep.kind = RepKind::custom;
      rep.images.clear();
      for (const auto& jm : jr.at("matrices")) {
        int d = (int)jm.size();
        MatrixXcd m(d, d);
        for (int r = 0; r < d; ++r)
          for (int cidx = 0; cidx < d; ++cidx)
            m(r, cidx) = cplx(jm[r][cidx][0].get<double>(), jm[r][cidx][1].get<double>());
        rep.images.push_back(m);
      }
      rep.dim = (int)rep.images[0].rows();
      rep.beta = jr.value("beta", 0.0);
      rep.validate(p);
    } else {
      throw ConfigError("unknown representation kind: " + kind);
    }
  }
  return {p, rep};
}

void save_group_file(const std::string& path, const GroupPreset& p, const LinearRep& rep) {
  json j;
  j["genus"] = p.genus;
  for (size_t i = 0; i < p.gens.size(); ++i) {
    j["generators"].push_back({{"label", (int)i},
                               {"a_re", p.gens[i].a.real()},
                               {"a_im", p.gens[i].a.imag()},
                               {"b_re", p.gens[i].b.real()},
                               {"b_im", p.gens[i].b.imag()}});
  }
  j["relator"] = p.relator;
  json jr;
  switch (rep.kind) {
    case RepKind::trivial: jr["kind"] = "trivial"; break;
    case RepKind::adjoint: jr["kind"] = "adjoint"; break;
    case RepKind::spin: jr["kind"] = "spin"; break;
    case RepKind::sym_power: jr["kind"] = "sym_power"; break;
    case RepKind::direct_sum: jr["kind"] = "direct_sum"; break;
    case RepKind::conjugate_deformation:
      jr["kind"] = "conjugate_deformation";
      if (rep.deformation) {
        jr["conjugator"] = {{"a_re", rep.deformation->a.real()},
                            {"a_im", rep.deformation->a.imag()},
                            {"b_re", rep.deformation->b.real()},
                            {"b_im", rep.deformation->b.imag()}};
      }
      break;
    case RepKind::custom: jr["kind"] = "custom"; break;
  }
  j["representation"] = jr;
  std::ofstream f(path);
  f << j.dump(2) << "\n";
}

}  // namespace hz
