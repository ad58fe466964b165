#include "hz/transfer.hpp"

#include <algorithm>
#include <functional>
#include <random>

namespace hz {

cplx analytic_derivative(const Moebius& g, cplx z) {
  // on S^1, |g'(z)| = 1/((conj(b) z + conj(a))(b/z + a)); the right hand side
  // is holomorphic near the circle and extends |g'| off it
  cplx f1 = std::conj(g.b) * z + std::conj(g.a);
  cplx f2 = g.b / z + g.a;
  return 1.0 / (f1 * f2);
}

std::uint64_t rep_hash_of(const LinearRep* rep) {
  if (!rep) return 0;
  std::uint64_t h = fnv1a(&rep->dim, sizeof(rep->dim));
  h = fnv1a(&rep->beta, sizeof(rep->beta), h);
  for (const auto& m : rep->images)
    h = fnv1a(m.data(), sizeof(cplx) * m.size(), h);
  if (rep->deformation) {
    cplx ab[2] = {rep->deformation->a, rep->deformation->b};
    h = fnv1a(ab, sizeof(ab), h);
  }
  return h;
}

static Eigen::MatrixXcd rho_inverse_of_word(const MarkovCoding& c, const LinearRep* rep,
                                            const std::vector<int>& word) {
  int d = rep ? rep->dim : 1;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(d, d);
  if (!rep) return m;
  // g = v_{w1}...v_{wn} with v_j = gen(inverse_label[branch_of j]), so
  // rho^{-1}(g) = rho(branch_n) ... rho(branch_1)
  for (int t = (int)word.size() - 1; t >= 0; --t)
    m = m * rep->image(c.branch_of[word[t]]);
  return m;
}

// barycentric cardinal values of the Chebyshev-Lobatto nodes at x in [-1,1]
static void cardinal_values(const std::vector<double>& nodes, double x, double* out) {
  int n = (int)nodes.size();
  for (int m = 0; m < n; ++m) {
    if (std::fabs(x - nodes[m]) < 1e-14) {
      for (int q = 0; q < n; ++q) out[q] = (q == m) ? 1.0 : 0.0;
      return;
    }
  }
  double denom = 0.0;
  for (int m = 0; m < n; ++m) {
    double w = (m == 0 || m == n - 1) ? 0.5 : 1.0;
    if (m & 1) w = -w;
    out[m] = w / (x - nodes[m]);
    denom += out[m];
  }
  for (int m = 0; m < n; ++m) out[m] /= denom;
}

TransferScheme make_transfer_scheme(const MarkovCoding& coding, const LinearRep* rep,
                                    double h, int N) {
  if (N < 2 || N > 64) throw DomainError("make_transfer_scheme: N must be in [2,64]");
  if (!(h > 0.0)) throw DomainError("make_transfer_scheme: h must be positive");
  if (h > coding.h_max + 1e-12)
    throw ValidityExceeded("make_transfer_scheme: h exceeds coding h_max");

  TransferScheme sch;
  sch.coding = &coding;
  sch.rep = rep;
  sch.h = h;
  sch.N = N;
  sch.k = coding.k;
  sch.dim = rep ? rep->dim : 1;
  sch.coding_hash = coding.hash();
  sch.rep_hash = rep_hash_of(rep);
  double margin = tube_inclusion_margin(coding, h);
  sch.step = margin > 0.0 ? 1 : coding.n0;

  std::vector<double> tnode(N);
  for (int m = 0; m < N; ++m) tnode[m] = std::cos(M_PI * m / (N - 1));
  sch.theta.resize((size_t)coding.k * N);
  sch.span.resize(coding.k);
  for (int j = 0; j < coding.k; ++j) {
    double len = arc_len(coding.arc_lo(j), coding.arc_hi(j));
    sch.span[j] = 0.5 * len + h * coding.width_weight[j];
    double mid = coding.arc_mid(j);
    for (int m = 0; m < N; ++m) sch.theta[(size_t)j * N + m] = mid + sch.span[j] * tnode[m];
  }

  // admissible words of length `step`
  std::vector<std::vector<int>> words;
  {
    std::vector<int> w;
    std::function<void(int)> grow = [&](int depth) {
      if (depth == sch.step) {
        words.push_back(w);
        return;
      }
      if (depth == 0) {
        for (int j = 0; j < coding.k; ++j) {
          w.push_back(j);
          grow(1);
          w.pop_back();
        }
      } else {
        for (int j : coding.succ[w.back()]) {
          w.push_back(j);
          grow(depth + 1);
          w.pop_back();
        }
      }
    };
    grow(0);
  }

  std::vector<double> card(N);
  for (const auto& w : words) {
    Moebius g = Moebius::identity();
    for (int t : w) g = compose(g, coding.inverse_branch(t));
    Eigen::MatrixXcd ri = rho_inverse_of_word(coding, rep, w);
    int src = w.front();
    for (int i : coding.succ[w.back()]) {
      TransferScheme::Edge e;
      e.target = i;
      e.source = src;
      e.g = g;
      e.rho_inv = ri;
      e.logw.resize(N);
      e.lag.resize((size_t)N * N);
      double mid_src = coding.arc_mid(src);
      for (int m = 0; m < N; ++m) {
        cplx z = std::polar(1.0, sch.theta[(size_t)i * N + m]);
        cplx dv = analytic_derivative(g, z);
        double ar = std::arg(dv);
        if (dv.real() <= 0.0 || std::fabs(ar) > 1.0)
          throw BranchCutCrossed("make_transfer_scheme: derivative left the principal branch");
        e.logw[m] = std::log(std::abs(dv));
        cplx img = g.apply(z);
        double dth = std::remainder(std::arg(img) - mid_src, TWO_PI);
        double x = dth / sch.span[src];
        if (std::fabs(x) > 1.0 + 1e-9)
          throw TubeInclusionFailed("make_transfer_scheme: image left the target tube");
        cardinal_values(tnode, std::clamp(x, -1.0, 1.0), card.data());
        for (int q = 0; q < N; ++q) e.lag[(size_t)m * N + q] = card[q];
      }
      sch.edges.push_back(std::move(e));
    }
  }
  return sch;
}

TransferMatrix assemble_transfer(const TransferScheme& sch, cplx s) {
  double t = std::fabs(s.imag());
  if (sch.h > 1.0 / (1.0 + t) + 1e-12)
    throw ValidityExceeded("assemble_transfer: need h <= 1/(1+|Im s|)");
  int N = sch.N, d = sch.dim;
  int n = sch.k * N * d;
  TransferMatrix tm;
  tm.s = s;
  tm.h = sch.h;
  tm.order = N;
  tm.step = sch.step;
  tm.k = sch.k;
  tm.dim = d;
  tm.coding_hash = sch.coding_hash;
  tm.rep_hash = sch.rep_hash;
  tm.blocks = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& e : sch.edges) {
    int rb = e.target * N * d, cb = e.source * N * d;
    for (int m = 0; m < N; ++m) {
      cplx wgt = std::exp(s * e.logw[m]);
      for (int q = 0; q < N; ++q) {
        double lv = e.lag[(size_t)m * N + q];
        if (lv == 0.0) continue;
        cplx f = wgt * lv;
        for (int u = 0; u < d; ++u)
          for (int v = 0; v < d; ++v)
            tm.blocks(rb + m * d + u, cb + q * d + v) += f * e.rho_inv(u, v);
      }
    }
  }
  return tm;
}

TransferMatrix discretize_transfer(const MarkovCoding& coding, const LinearRep* rep, cplx s,
                                   double h, int N) {
  return assemble_transfer(make_transfer_scheme(coding, rep, h, N), s);
}

cplx det_id_minus(const TransferMatrix& tm) {
  Eigen::MatrixXcd T = -tm.blocks;
  T.diagonal().array() += 1.0;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(T);
  double logmag = 0.0, phase = 0.0;
  for (int i = 0; i < T.rows(); ++i) {
    cplx d = lu.matrixLU()(i, i);
    logmag += std::log(std::abs(d));
    phase += std::arg(d);
  }
  double sign = lu.permutationP().determinant();
  if (sign < 0) phase += M_PI;
  return std::polar(std::exp(logmag), phase);
}

double leading_eigenvalue(const TransferMatrix& tm, int krylov) {
  int n = (int)tm.blocks.rows();
  krylov = std::min(krylov, n);
  std::mt19937_64 rg(12345);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Eigen::MatrixXcd V(n, krylov + 1);
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(krylov + 1, krylov);
  for (int i = 0; i < n; ++i) V(i, 0) = cplx(U(rg), U(rg));
  V.col(0) /= V.col(0).norm();
  int m = krylov;
  for (int q = 0; q < krylov; ++q) {
    Eigen::VectorXcd w = tm.blocks * V.col(q);
    for (int p = 0; p <= q; ++p) {
      H(p, q) = V.col(p).dot(w);
      w -= H(p, q) * V.col(p);
    }
    H(q + 1, q) = w.norm();
    if (std::abs(H(q + 1, q)) < 1e-14) {
      m = q + 1;
      break;
    }
    V.col(q + 1) = w / H(q + 1, q);
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(H.topLeftCorner(m, m));
  double r = 0.0;
  for (int i = 0; i < m; ++i) r = std::max(r, std::abs(es.eigenvalues()(i)));
  return r;
}

}  // namespace hz
