#include "hz/zeta.hpp"

#include <map>

#include "hz/thermo.hpp"

namespace hz {

static const double VOL = 4.0 * M_PI;  // Gauss-Bonnet at genus 2

static Eigen::MatrixXcd class_matrix(const MarkovCoding& c, const LinearRep* rep,
                                     const std::vector<int>& word) {
  int d = rep ? rep->dim : 1;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(d, d);
  if (!rep) return m;
  for (int t = (int)word.size() - 1; t >= 0; --t)
    m = m * rep->image(c.branch_of[word[t]]);
  return m;
}

const ZetaClassSet& zeta_classes(const MarkovCoding& coding, const LinearRep* rep, int n_cap) {
  static std::map<std::tuple<std::uint64_t, std::uint64_t, int>, ZetaClassSet> cache;
  auto key = std::make_tuple(coding.hash(), rep_hash_of(rep), n_cap);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  ZetaClassSet set;
  set.n_cap = n_cap;
  for (const auto& pc : primitive_classes(coding, rep, n_cap)) {
    ClassData cd;
    cd.ell = pc.cyl.ell;
    cd.ell_rho = pc.cyl.ell_rho;
    cd.word_len = (int)pc.cyl.word.size();
    cd.overcounted = pc.duplicate;
    if (rep) {
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(class_matrix(coding, rep, pc.cyl.word),
                                                     false);
      for (int i = 0; i < rep->dim; ++i) cd.eig.push_back(es.eigenvalues()(i));
    } else {
      cd.eig.push_back(1.0);
    }
    (cd.overcounted ? set.overcounted : set.classes).push_back(std::move(cd));
  }
  return cache.emplace(key, std::move(set)).first->second;
}

double rep_delta(const MarkovCoding& coding, const LinearRep* rep) {
  static std::map<std::pair<std::uint64_t, std::uint64_t>, double> cache;
  auto key = std::make_pair(coding.hash(), rep_hash_of(rep));
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  double beta = rep ? rep->beta : 0.0;
  double d = critical_exponent(coding, rep, beta, false, 8);
  cache[key] = d;
  return d;
}

cplx log_derivative_series(cplx s, const LinearRep* rep, const MarkovCoding& coding,
                           double L_max, double* tail_bound, bool* converged) {
  double delta = rep_delta(coding, rep);
  if (s.real() <= delta + 0.2)
    throw NotConverged("log_derivative_series: need Re s > delta + 0.2");
  const ZetaClassSet& set = zeta_classes(coding, rep);
  cplx sum = 0.0;
  double shell = 0.0;  // |terms| with total length in the last half-unit
  for (const auto& cd : set.classes) {
    for (int k = 1; k * cd.ell <= L_max; ++k) {
      cplx tr = 0.0;
      for (cplx lam : cd.eig) tr += std::pow(lam, k);
      cplx term = cd.ell / (1.0 - std::exp(-k * cd.ell)) * tr * std::exp(-s * (k * cd.ell));
      sum += term;
      if (k * cd.ell > L_max - 0.5) shell += std::abs(term);
    }
  }
  double rate = delta + 0.2 - s.real();  // negative
  double tb = shell * std::exp(0.5 * rate) / (1.0 - std::exp(0.5 * rate));
  if (tail_bound) *tail_bound = tb;
  if (converged) *converged = shell < 1e-9 * std::abs(sum);
  return sum;
}

ZetaValue euler_product(cplx s, const LinearRep* rep, const MarkovCoding& coding,
                        double L_max, int k_max) {
  double delta = rep_delta(coding, rep);
  if (s.real() <= delta + 0.2) throw NotConverged("euler_product: need Re s > delta + 0.2");
  const ZetaClassSet& set = zeta_classes(coding, rep);
  cplx logz = 0.0;
  for (const auto& cd : set.classes) {
    if (cd.ell > L_max) continue;
    for (int k = 0; k < k_max; ++k) {
      double scale = std::exp(-(s.real() + k) * cd.ell);
      if (scale < 1e-14) break;
      cplx e = std::exp(-(s + (double)k) * cd.ell);
      for (cplx lam : cd.eig) logz += std::log(1.0 - lam * e);
    }
  }
  ZetaValue zv;
  zv.s = s;
  zv.value = std::exp(logz);
  zv.method = ZetaMethod::euler;
  zv.L_max = L_max;
  zv.k_max = k_max;
  zv.n_cap = set.n_cap;
  zv.error_bound = std::exp((delta + 0.2 - s.real()) * L_max);
  return zv;
}

cplx transfer_trace_orbit(cplx s, const LinearRep* rep, const MarkovCoding& coding, int n) {
  if (n < 1) throw DomainError("transfer_trace_orbit: n >= 1");
  if (n > 12) throw CapExceeded("transfer_trace_orbit: n exceeds cylinder cap");
  bool scalar_triv = !rep || ((rep->kind == RepKind::trivial ||
                               rep->kind == RepKind::conjugate_deformation) &&
                              rep->dim == 1);
  bool adjoint_id = rep && rep->kind == RepKind::adjoint && !rep->deformation;
  if (scalar_triv || adjoint_id) {
    // the character is a function of ell alone: use the cached histograms
    const LenHist& H = closed_length_histogram(coding, n);
    cplx sum = 0.0;
    for (size_t i = 0; i < H.ell.size(); ++i) {
      double l = H.ell[i];
      double chi = adjoint_id ? 1.0 + 2.0 * std::cosh(l) : 1.0;
      sum += H.count[i] * chi * std::exp(-s * l) / (1.0 - std::exp(-l));
    }
    return sum;
  }
  // general representation: exact DFS with matrix prefixes
  int d = rep->dim;
  std::vector<int> word(n);
  std::vector<Eigen::MatrixXcd> pre(n + 1, Eigen::MatrixXcd::Identity(d, d));
  std::vector<Moebius> mob(n + 1);
  mob[0] = Moebius::identity();
  std::vector<int> choice(n, -1);
  cplx sum = 0.0;
  int depth = 0;
  while (depth >= 0) {
    int next = ++choice[depth];
    if (depth == 0) {
      if (next >= coding.k) break;
      word[0] = next;
    } else {
      const auto& sc = coding.succ[word[depth - 1]];
      if (next >= (int)sc.size()) {
        choice[depth] = -1;
        --depth;
        continue;
      }
      word[depth] = sc[next];
    }
    mob[depth + 1] = compose(mob[depth], coding.inverse_branch(word[depth]));
    pre[depth + 1] = rep->image(coding.branch_of[word[depth]]) * pre[depth];
    if (depth + 1 == n) {
      if (coding.A[word[n - 1]][word[0]] && mob[n].is_hyperbolic()) {
        double l = translation_length(mob[n]);
        sum += pre[n].trace() * std::exp(-s * l) / (1.0 - std::exp(-l));
      }
      continue;
    }
    ++depth;
  }
  return sum;
}

ZetaValue fredholm_det_orbit(cplx s, const LinearRep* rep, const MarkovCoding& coding,
                             int p_max) {
  double delta = rep_delta(coding, rep);
  if (s.real() <= delta + 0.2)
    throw NotConverged("fredholm_det_orbit: need Re s > delta + 0.2");
  cplx acc = 0.0;
  double prev = 0.0, last = 0.0, ratio = 0.0;
  for (int p = 1; p <= p_max; ++p) {
    cplx t = transfer_trace_orbit(s, rep, coding, p) / (double)p;
    acc += t;
    prev = last;
    last = std::abs(t);
    if (prev > 0.0) ratio = last / prev;
  }
  double q = std::max(ratio, 0.5);
  if (q >= 0.95) throw NotConverged("fredholm_det_orbit: trace sequence not decaying");
  double base = std::max(last, ratio * prev);
  ZetaValue zv;
  zv.s = s;
  zv.value = std::exp(-acc);
  zv.method = ZetaMethod::orbit_det;
  zv.p_max = p_max;
  zv.error_bound = base * q / (1.0 - q);
  zv.converged = zv.error_bound < 1e-9;
  return zv;
}

static const TransferScheme& cached_scheme(const MarkovCoding& coding, const LinearRep* rep,
                                           double h, int N) {
  static std::map<std::tuple<std::uint64_t, std::uint64_t, long long, int>, TransferScheme>
      cache;
  auto key = std::make_tuple(coding.hash(), rep_hash_of(rep), llround(h * 1e12), N);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  return cache.emplace(key, make_transfer_scheme(coding, rep, h, N)).first->second;
}

ZetaValue fredholm_det_matrix(cplx s, const LinearRep* rep, const MarkovCoding& coding,
                              double h, int N) {
  const TransferScheme& sch = cached_scheme(coding, rep, h, N);
  ZetaValue zv;
  zv.s = s;
  zv.value = det_id_minus(assemble_transfer(sch, s));
  zv.method = ZetaMethod::matrix_det;
  zv.h = h;
  zv.N = N;
  zv.error_bound = 1e-9;
  return zv;
}

cplx overcount_correction(cplx s, const LinearRep* rep, const MarkovCoding& coding) {
  const ZetaClassSet& set = zeta_classes(coding, rep);
  cplx corr = 1.0;
  for (const auto& cd : set.overcounted) {
    for (int k = 0; k < 256; ++k) {
      double scale = std::exp(-(s.real() + k) * cd.ell);
      if (scale < 1e-16) break;
      cplx e = std::exp(-(s + (double)k) * cd.ell);
      for (cplx lam : cd.eig) corr *= 1.0 - lam * e;
    }
  }
  return corr;
}

// adaptive Simpson on [a,b] for a complex-valued integrand along a straight path
template <class F>
static cplx simpson_rec(const F& f, cplx a, cplx b, cplx fa, cplx fm, cplx fb, cplx whole,
                        double tol, int depth) {
  cplx m = 0.5 * (a + b);
  cplx lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  cplx flm = f(lm), frm = f(rm);
  cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  cplx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

template <class F>
static cplx adaptive_simpson(const F& f, cplx a, cplx b, double tol) {
  cplx fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  cplx whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

cplx heat_trace_geometric(double t, const LinearRep* rep, const MarkovCoding& coding,
                          double L_max) {
  if (!(t > 0.0)) throw DomainError("heat_trace_geometric: t > 0 required");
  int dim = rep ? rep->dim : 1;
  double delta = rep_delta(coding, rep);
  // identity contribution (1/4pi^2) dim Vol int e^{-t(l^2+1/4)} l pi tanh(l pi) dl
  double lam_cut = std::sqrt(45.0 / t);
  auto f = [&](cplx lam) -> cplx {
    double x = lam.real();
    return std::exp(-t * (x * x + 0.25)) * x * M_PI * std::tanh(x * M_PI);
  };
  double ident = dim * VOL / (4.0 * M_PI * M_PI) * 2.0 *
                 adaptive_simpson(f, cplx(0.0), cplx(lam_cut), 1e-11).real();
  // class sum with certified Gaussian tail
  double growth = delta + 0.3;
  if (L_max / (2.0 * t) <= growth)
    throw TailNotCertified("heat_trace_geometric: Gaussian loses to e^{(delta+eps)L} before "
                           "L_max; decrease t below L_max/(2 delta + 0.6)");
  const ZetaClassSet& set = zeta_classes(coding, rep);
  cplx csum = 0.0;
  for (const auto& cd : set.classes) {
    for (int k = 1; k * cd.ell <= L_max; ++k) {
      cplx tr = 0.0;
      for (cplx lam : cd.eig) tr += std::pow(lam, k);
      double kl = k * cd.ell;
      csum += tr * cd.ell / (2.0 * std::sinh(0.5 * kl)) * std::exp(-0.25 * t) *
              std::exp(-kl * kl / (4.0 * t)) / std::sqrt(4.0 * M_PI * t);
    }
  }
  double tail = dim * std::exp(growth * L_max - L_max * L_max / (4.0 * t)) /
                (L_max / (2.0 * t) - growth);
  if (tail > 1e-10 * (std::abs(csum) + std::fabs(ident)))
    throw TailNotCertified("heat_trace_geometric: tail bound above 1e-10 of the sum; "
                           "increase L_max");
  return ident + csum;
}

double functional_equation_residual(cplx s, const LinearRep* rep, const MarkovCoding& coding,
                                    double h, int N, bool deform) {
  cplx w = s - 0.5;
  // poles of tan(pi r) at half-integers on the real axis
  auto near_pole = [&](cplx a, cplx b) {
    // min distance from segment [a,b] to any real half-integer within range
    double lo = std::min(a.real(), b.real()) - 1.0, hi = std::max(a.real(), b.real()) + 1.0;
    double dmin = 1e18;
    for (double p = std::floor(lo) + 0.5; p <= hi; p += 1.0) {
      cplx ab = b - a;
      double L2 = std::norm(ab);
      double u = L2 > 0 ? std::clamp(((p - a.real()) * ab.real() +
                                      (0.0 - a.imag()) * ab.imag()) / L2, 0.0, 1.0)
                        : 0.0;
      cplx q = a + u * ab;
      dmin = std::min(dmin, std::abs(q - cplx(p, 0.0)));
    }
    return dmin;
  };
  double wp = std::fabs(std::remainder(w.real(), 1.0)) - 0.5;
  if (std::fabs(w.imag()) < 0.02 && std::fabs(wp) < 0.02 && std::abs(w) > 0.02)
    throw ContourThroughPole("functional_equation_residual: s - 1/2 lands on a pole of tan");
  auto f = [](cplx r) { return r * std::tan(M_PI * r); };
  cplx integral = 0.0;
  if (std::abs(w) > 1e-14) {
    if (near_pole(cplx(0.0), w) < 0.05) {
      if (!deform)
        throw ContourThroughPole("functional_equation_residual: straight path passes a pole "
                                 "of tan; deform the contour");
      double q = w.imag() >= 0.0 ? 0.1 : -0.1;
      cplx p1(0.0, q), p2(w.real(), q);
      integral = adaptive_simpson(f, cplx(0.0), p1, 1e-12) +
                 adaptive_simpson(f, p1, p2, 1e-12) + adaptive_simpson(f, p2, w, 1e-12);
    } else {
      integral = adaptive_simpson(f, cplx(0.0), w, 1e-12);
    }
  }
  cplx corr_s = overcount_correction(s, rep, coding);
  cplx corr_r = overcount_correction(1.0 - s, rep, coding);
  cplx zs = fredholm_det_matrix(s, rep, coding, h, N).value / corr_s;
  cplx zr = fredholm_det_matrix(1.0 - s, rep, coding, h, N).value / corr_r;
  int dim = rep ? rep->dim : 1;
  cplx rhs = zr * std::exp((double)dim * VOL * integral);
  return std::abs(zs - rhs) / std::max(std::abs(zs), 1e-300);
}

}  // namespace hz
