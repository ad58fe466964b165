#include "hz/spectral.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "hz/bergman.hpp"

namespace hz {

cplx s_to_lambda(cplx s) { return s * (1.0 - s); }

bool parabola_contains(const ParabolicRegion& region, cplx lam) {
  if (!(region.sigma >= 0.5)) throw DomainError("parabola_contains: need sigma >= 1/2");
  double x = lam.real(), y = lam.imag();
  if (region.sigma == 0.5)  // degenerate ray [1/4, inf)
    return std::fabs(y) <= 1e-300 && x >= 0.25;
  double w = 1.0 - 2.0 * region.sigma;
  return x >= region.sigma * (1.0 - region.sigma) + y * y / (w * w);
}

void ZeroList::merge(const ZeroEntry& e) {
  for (auto& z : zeros) {
    if (std::abs(z.s - e.s) < 1e-6) {
      z.multiplicity = std::max(z.multiplicity, e.multiplicity);
      if (e.residual < z.residual) {
        z.s = e.s;
        z.lambda = e.lambda;
        z.residual = e.residual;
      }
      z.winding_confirmed = z.winding_confirmed || e.winding_confirmed;
      return;
    }
  }
  zeros.push_back(e);
}

namespace {

struct DetFn {
  const LinearRep* rep;
  const MarkovCoding* coding;
  double h;
  int N;
  bool real_character;  // real characters give det(s-bar) = conj det(s)
  std::map<std::pair<long long, long long>, cplx> cache;

  cplx operator()(cplx s) {
    auto key = std::make_pair(llround(s.real() * 1e12), llround(s.imag() * 1e12));
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    if (real_character) {
      auto cit = cache.find(std::make_pair(key.first, -key.second));
      if (cit != cache.end()) {
        cplx v = std::conj(cit->second);
        cache.emplace(key, v);
        return v;
      }
    }
    cplx v = fredholm_det_matrix(s, rep, *coding, h, N).value /
             overcount_correction(s, rep, *coding);
    cache.emplace(key, v);
    return v;
  }
};

bool has_real_character(const LinearRep* rep) {
  if (!rep) return true;
  for (const auto& m : rep->images)
    if (std::fabs(m.trace().imag()) > 1e-10) return false;
  return true;
}

struct ContourAccum {
  double arg_sum = 0.0;
  cplx moment{0.0, 0.0};  // approximates contour integral of (s - center) dlog F
  double min_abs = 1e300, max_abs = 0.0;
};

void walk_segment(DetFn& F, cplx a, cplx b, cplx Fa, cplx Fb, cplx center, int depth,
                  ContourAccum& acc) {
  double da = std::arg(Fb / Fa);
  if (std::fabs(da) >= 1.6 && depth < 28) {
    cplx m = 0.5 * (a + b), Fm = F(m);
    walk_segment(F, a, m, Fa, Fm, center, depth + 1, acc);
    walk_segment(F, m, b, Fm, Fb, center, depth + 1, acc);
    return;
  }
  acc.arg_sum += da;
  cplx dlog = std::log(std::abs(Fb) / std::abs(Fa)) + cplx(0, 1) * da;
  acc.moment += (0.5 * (a + b) - center) * dlog;
  acc.min_abs = std::min({acc.min_abs, std::abs(Fa), std::abs(Fb)});
  acc.max_abs = std::max({acc.max_abs, std::abs(Fa), std::abs(Fb)});
}

ContourAccum walk_closed(DetFn& F, const std::vector<cplx>& pts, cplx center) {
  ContourAccum acc;
  int n = (int)pts.size();
  std::vector<cplx> vals(n);
  for (int i = 0; i < n; ++i) vals[i] = F(pts[i]);
  for (int i = 0; i < n; ++i)
    walk_segment(F, pts[i], pts[(i + 1) % n], vals[i], vals[(i + 1) % n], center, 0, acc);
  if (acc.min_abs < 1e-9 * acc.max_abs)
    throw ContourZeroOnBoundary("zero_scan: |det| vanishes on a contour");
  return acc;
}

std::vector<cplx> rect_pts(double x0, double x1, double y0, double y1, int per_edge) {
  std::vector<cplx> pts;
  for (int i = 0; i < per_edge; ++i) pts.emplace_back(x0 + (x1 - x0) * i / per_edge, y0);
  for (int i = 0; i < per_edge; ++i) pts.emplace_back(x1, y0 + (y1 - y0) * i / per_edge);
  for (int i = 0; i < per_edge; ++i) pts.emplace_back(x1 - (x1 - x0) * i / per_edge, y1);
  for (int i = 0; i < per_edge; ++i) pts.emplace_back(x0, y1 - (y1 - y0) * i / per_edge);
  return pts;
}

std::vector<cplx> circle_pts(cplx c, double r, int n) {
  std::vector<cplx> pts;
  for (int i = 0; i < n; ++i) pts.push_back(c + std::polar(r, TWO_PI * i / n));
  return pts;
}

int winding_of(double arg_sum) { return (int)llround(arg_sum / TWO_PI); }

void record_zero(DetFn& F, cplx z, int w, double scale, ZeroList& out) {
  ZeroEntry e;
  e.s = z;
  e.lambda = s_to_lambda(z);
  e.multiplicity = std::abs(w);
  e.winding_confirmed = true;
  e.residual = std::abs(F(z)) / std::max(scale, 1e-300);
  for (int m = 0; m >= -8; --m)
    if (std::abs(z - (double)m) < 0.05) e.ambiguous = true;
  out.merge(e);
}

// contour-moment iteration on shrinking circles; false when the cell's zeros
// do not behave as a single cluster (caller subdivides instead)
bool refine_zero(DetFn& F, cplx center, double radius, int w, ZeroList& out) {
  cplx z = center;
  double r = radius, scale = 0.0;
  int expands = 0, its_done = 0;
  for (int it = 0; it < 14; ++it) {
    ContourAccum acc = walk_closed(F, circle_pts(z, r, 16), z);
    int wc = winding_of(acc.arg_sum);
    if (wc == 0) {  // cluster slipped outside the circle; widen
      if (++expands > 2) return false;
      r *= 2.2;
      continue;
    }
    if (wc != w) return false;
    ++its_done;
    scale = acc.max_abs;
    z += acc.moment / (cplx(0, TWO_PI) * (double)w);
    if (w == 1 && its_done >= 3) break;  // Newton takes over
    if (r < 2e-7) break;
    r *= 0.35;
  }
  if (its_done == 0) return false;
  if (w == 1) {  // simple zero: polish with Newton steps on a numerical derivative
    for (int it = 0; it < 5; ++it) {
      cplx f = F(z);
      cplx fp = (F(z + 5e-7) - F(z - 5e-7)) / 1e-6;
      if (std::abs(fp) == 0.0) break;
      cplx step = f / fp;
      if (std::abs(step) > radius) break;
      z -= step;
    }
  }
  record_zero(F, z, w, scale, out);
  return true;
}

void scan_cell(DetFn& F, double x0, double x1, double y0, double y1, ZeroList& out) {
  cplx c(0.5 * (x0 + x1), 0.5 * (y0 + y1));
  ContourAccum acc = walk_closed(F, rect_pts(x0, x1, y0, y1, 6), c);
  int w = winding_of(acc.arg_sum);
  if (w == 0) return;
  double size = std::max(x1 - x0, y1 - y0);
  cplx est = c + acc.moment / (cplx(0, TWO_PI) * (double)w);
  if (size <= 0.25 && refine_zero(F, est, 0.75 * size, w, out)) return;
  if (size <= 1e-3) {  // unseparable cluster: report the centroid
    record_zero(F, est, w, acc.max_abs, out);
    return;
  }
  {
    // retry with shifted split lines when one passes through a zero
    const double frac[3] = {0.5, 0.5625, 0.4375};
    for (int a = 0; a < 3; ++a) {
      double xm = x0 + (x1 - x0) * frac[a], ym = y0 + (y1 - y0) * frac[a];
      try {
        ZeroList sub;
        sub.rect = out.rect;
        scan_cell(F, x0, xm, y0, ym, sub);
        scan_cell(F, xm, x1, y0, ym, sub);
        scan_cell(F, x0, xm, ym, y1, sub);
        scan_cell(F, xm, x1, ym, y1, sub);
        for (const auto& z : sub.zeros) out.merge(z);
        return;
      } catch (const ContourZeroOnBoundary&) {
        if (a == 2) throw;
      }
    }
  }
}

}  // namespace

ZeroList zero_scan(const LinearRep* rep, const MarkovCoding& coding, const ScanRect& rect,
                   double h, int N, int grid) {
  if (!(rect.sigma_max > rect.sigma_min) || !(rect.t_max > rect.t_min))
    throw DomainError("zero_scan: empty rectangle");
  double t_abs = std::max(std::fabs(rect.t_min), std::fabs(rect.t_max));
  if (h > 1.0 / (1.0 + t_abs) + 1e-12)
    throw ValidityExceeded("zero_scan: need h <= 1/(1+t_max)");
  double delta = rep_delta(coding, rep);
  if (rect.sigma_min < 1.0 - delta - 0.2 - 1e-9)
    throw DomainError("zero_scan: rectangle extends left of the certified region");
  if (grid < 1) throw DomainError("zero_scan: grid must be positive");

  DetFn F{rep, &coding, h, N, has_real_character(rep), {}};
  const double jit[3] = {0.0, 3.7e-4, 8.9e-4};
  for (int attempt = 0; attempt < 3; ++attempt) {
    double e = jit[attempt];
    ZeroList out;
    out.rect = rect;
    // asymmetric inflation so interior grid lines move too, not just the border
    double xl = rect.sigma_min - e, xr = rect.sigma_max + 2.3 * e;
    double yl = rect.t_min - e, yr = rect.t_max + 2.3 * e;
    try {
      ContourAccum acc = walk_closed(
          F, rect_pts(xl, xr, yl, yr, 6),
          cplx(0.5 * (rect.sigma_min + rect.sigma_max), 0.5 * (rect.t_min + rect.t_max)));
      out.total_winding = winding_of(acc.arg_sum);
      for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
          double x0 = xl + (xr - xl) * i / grid;
          double x1 = xl + (xr - xl) * (i + 1) / grid;
          double y0 = yl + (yr - yl) * j / grid;
          double y1 = yl + (yr - yl) * (j + 1) / grid;
          scan_cell(F, x0, x1, y0, y1, out);
        }
      return out;
    } catch (const ContourZeroOnBoundary&) {
      if (attempt == 2) throw;
    }
  }
  throw ContourZeroOnBoundary("zero_scan: contour kept hitting zeros after jitter");
}

namespace {

// s with Re >= 1/2 mapping to lam under s(1-s)
cplx upper_preimage(cplx lam) {
  cplx s = 0.5 + std::sqrt(cplx(0.25, 0.0) - lam);
  if (s.real() < 0.5) s = 1.0 - s;
  return s;
}

bool in_rect(const ScanRect& r, cplx s) {
  return s.real() >= r.sigma_min - 1e-9 && s.real() <= r.sigma_max + 1e-9 &&
         s.imag() >= r.t_min - 1e-9 && s.imag() <= r.t_max + 1e-9;
}

// eigenvalue counting convention: zeros with Re s > 1/2, or Re s = 1/2 and Im s >= 0;
// conjugates missing only because the rectangle stopped at the real axis are restored
// (real characters give conjugation-symmetric zero sets)
std::vector<ZeroEntry> counted_zeros(const ZeroList& zl) {
  std::vector<ZeroEntry> out;
  for (const auto& z : zl.zeros) {
    bool on_line = std::fabs(z.s.real() - 0.5) <= 1e-9;
    if (on_line ? z.s.imag() >= -1e-9 : z.s.real() > 0.5) out.push_back(z);
    if (!on_line && z.s.real() > 0.5 && std::fabs(z.s.imag()) > 1e-9) {
      cplx c = std::conj(z.s);
      bool present = false;
      for (const auto& o : zl.zeros) present = present || std::abs(o.s - c) < 1e-6;
      if (!present && !in_rect(zl.rect, c)) {
        ZeroEntry e = z;
        e.s = c;
        e.lambda = s_to_lambda(c);
        out.push_back(e);
      }
    }
  }
  return out;
}

}  // namespace

int count_windows(const ZeroList& zeros, double sigma, double r) {
  if (!(r > 0.0)) throw DomainError("count_windows: need r > 0");
  ParabolicRegion reg{sigma};
  double r_hi = r + std::sqrt(r);
  // the annulus portion outside C_sigma must map into the scanned rectangle
  for (int i = 0; i <= 24; ++i)
    for (int j = 0; j < 96; ++j) {
      cplx lam = std::polar(r + (r_hi - r) * i / 24.0, TWO_PI * j / 96.0);
      if (parabola_contains(reg, lam)) continue;
      cplx s = upper_preimage(lam);
      if (!in_rect(zeros.rect, s) && !in_rect(zeros.rect, std::conj(s)))
        throw CoverageInsufficient("count_windows: annulus not covered by the scan");
    }
  int count = 0;
  for (const auto& z : counted_zeros(zeros)) {
    double m = std::abs(z.lambda);
    if (m >= r - 1e-9 && m <= r_hi + 1e-9 && !parabola_contains(reg, z.lambda))
      count += z.multiplicity;
  }
  return count;
}

WeylReport weyl_compare(const ZeroList& zeros, const LinearRep* rep,
                        const MarkovCoding& coding, double T) {
  if (!(T >= 0.0)) throw DomainError("weyl_compare: need T >= 0");
  WeylReport rep_out;
  rep_out.T = T;
  int dim = rep ? rep->dim : 1;
  rep_out.predicted = dim * T;  // dim * Vol/(4 pi) * T with Vol = 4 pi
  if (T > 0.0) {
    double delta = rep_delta(coding, rep);
    double t_need = std::sqrt(std::max(T - 0.25, 0.0));
    if (zeros.rect.sigma_min > 0.5 - 0.02 || zeros.rect.sigma_max < delta + 0.02 ||
        zeros.rect.t_min > 0.0 || zeros.rect.t_max < t_need - 1e-9)
      throw CoverageInsufficient("weyl_compare: scan rectangle too small for T");
  }
  for (const auto& z : counted_zeros(zeros))
    if (std::abs(z.lambda) <= T + 1e-9) rep_out.observed += z.multiplicity;
  rep_out.ratio = rep_out.predicted > 0.0 ? rep_out.observed / rep_out.predicted : 0.0;
  return rep_out;
}

double jensen_count_bound(const std::vector<double>& log_abs_on_circle,
                          double log_abs_center, double r, double r_tilde) {
  if (log_abs_on_circle.empty()) throw DomainError("jensen_count_bound: no samples");
  if (!(r_tilde > 0.0 && r_tilde < r))
    throw DomainError("jensen_count_bound: need 0 < r_tilde < r");
  if (!std::isfinite(log_abs_center) || log_abs_center < -690.0)
    throw CenterIsZero("jensen_count_bound: f vanishes at the center");
  KahanSum mean;
  for (double v : log_abs_on_circle) mean.add(v);
  return (mean.value() / log_abs_on_circle.size() - log_abs_center) /
         std::log(r / r_tilde);
}

HSReport hs_diagnostic(const LinearRep* rep, const MarkovCoding& coding, cplx s, double h,
                       int n) {
  if (n < 2 || (n & 1)) throw DomainError("hs_diagnostic: n must be even and >= 2");
  if (n > 8) throw CapExceeded("hs_diagnostic: n capped at 8");
  double sigma = s.real(), beta = rep ? rep->beta : 0.0;
  HSReport rep_out;

  // diagonal part: doubled-weight periodic sum over level-n closed orbits,
  // including the double-covering coding classes (they are periodic words too)
  const ZetaClassSet& cs = zeta_classes(coding, rep, n);
  KahanSum s1;
  auto add_classes = [&](const std::vector<ClassData>& v) {
    for (const auto& cd : v) {
      if (cd.word_len > n || n % cd.word_len) continue;
      double p = (double)n / cd.word_len;
      s1.add(cd.word_len * std::exp(p * (2.0 * beta * cd.ell_rho - 2.0 * sigma * cd.ell)));
    }
  };
  add_classes(cs.classes);
  add_classes(cs.overcounted);
  rep_out.S1 = s1.value();

  // ||L^{n/2}||_HS^2 over the h-tubes with numeric Bergman kernels
  int m = n / 2, d = rep ? rep->dim : 1;
  TransferScheme sch = make_transfer_scheme(coding, rep, h, 2);  // validates tubes
  std::vector<PlanarDomain> tubes;
  std::vector<KernelApprox> kernels;
  std::vector<double> lo(coding.k), hi(coding.k);
  for (int j = 0; j < coding.k; ++j) {
    double mid = coding.arc_mid(j);
    double span = 0.5 * arc_len(coding.arc_lo(j), coding.arc_hi(j)) +
                  h * coding.width_weight[j];
    lo[j] = mid - span;
    hi[j] = mid + span;
    tubes.push_back(make_tube(lo[j], hi[j], h, 6));
    for (int nb = 32;; nb -= 8) {
      if (nb < 8) throw IllConditionedGram("hs_diagnostic: no usable tube basis");
      try {
        kernels.push_back(numeric_kernel(tubes[j], nb));
        break;
      } catch (const IllConditionedGram&) {
      }
    }
  }
  KahanSum deep, shallow;
  std::vector<int> word;
  Eigen::VectorXcd phi;
  std::function<void(Moebius, Eigen::MatrixXcd)> grow = [&](Moebius g, Eigen::MatrixXcd ri) {
    if ((int)word.size() == m) {
      int j0 = word.front();
      double rho2 = ri.squaredNorm();
      for (int i : coding.succ[word.back()]) {
        const PlanarDomain& dom = tubes[i];
        for (size_t q = 0; q < dom.qnode.size(); ++q) {
          cplx z = dom.qnode[q];
          cplx dv = analytic_derivative(g, z);
          double wgt = std::exp(2.0 * sigma * std::log(std::abs(dv)));
          cplx gz = g.apply(z);
          double B = 0.0;
          kernels[j0].basis_at(gz, phi);
          B = phi.squaredNorm();
          double term = dom.qweight[q] * wgt * rho2 * B;
          double r = std::abs(gz), th = std::arg(gz);
          double depth = std::min({h - std::fabs(r - 1.0),
                                   r * std::remainder(th - lo[j0], TWO_PI),
                                   r * std::remainder(hi[j0] - th, TWO_PI)});
          if (depth >= 0.5 * h)
            deep.add(term);
          else
            shallow.add(term);
        }
      }
      return;
    }
    std::vector<int> firsts;
    if (word.empty())
      for (int t = 0; t < coding.k; ++t) firsts.push_back(t);
    const auto& nexts = word.empty() ? firsts : coding.succ[word.back()];
    for (int t : nexts) {
      word.push_back(t);
      Moebius g2 = compose(g, coding.inverse_branch(t));
      Eigen::MatrixXcd r2 =
          rep ? (rep->image(coding.branch_of[t]) * ri).eval() : ri;
      grow(g2, r2);
      word.pop_back();
    }
  };
  grow(Moebius::identity(), Eigen::MatrixXcd::Identity(d, d));
  rep_out.S2 = shallow.value();
  rep_out.hs_norm_sq = deep.value() + shallow.value();

  // matrix-side bound: log|det(I - M^n)| <= ||M^{n/2}||_F^2 holds exactly
  TransferMatrix tm = discretize_transfer(coding, rep, s, h, 20);
  Eigen::MatrixXcd A = tm.blocks;
  for (int i = 1; i < m; ++i) A = (A * tm.blocks).eval();
  double hs_matrix = A.squaredNorm();
  Eigen::MatrixXcd IM = -A * A;
  IM.diagonal().array() += 1.0;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(IM);
  double logdet = 0.0;
  for (int i = 0; i < IM.rows(); ++i) logdet += std::log(std::abs(lu.matrixLU()(i, i)));
  rep_out.log_det = logdet;
  rep_out.slack = std::max(0.0, hs_matrix - rep_out.hs_norm_sq);
  return rep_out;
}

}  // namespace hz
