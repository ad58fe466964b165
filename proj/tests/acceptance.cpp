// acceptance: one PASS/FAIL line per criterion; exit code = number of failures
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hz/bergman.hpp"
#include "hz/coding.hpp"
#include "hz/groups.hpp"
#include "hz/spectral.hpp"
#include "hz/thermo.hpp"
#include "hz/zeta.hpp"

using namespace hz;

namespace {

const GroupPreset& P() {
  static GroupPreset p = octagon_preset();
  return p;
}
const MarkovCoding& C() {
  static MarkovCoding c = build_bowen_series(P());
  return c;
}

struct Line {
  bool pass = true;
  std::string detail;
  void req(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) {
    detail += (detail.empty() ? "" : "; ") + what;
  }
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// ---------------------------------------------------------------- criterion 1
void c01(Line& L) {
  const CodingReport& r = C().report;
  L.req(r.markov_residual_max <= 1e-9, fmt("markov residual %.2e", r.markov_residual_max));
  L.req(C().D > 1.0, fmt("two-step expansion %.4f", C().D));
  L.req(C().p0 <= 8, fmt("mixing exponent %d", C().p0));
  L.req(r.ok, "report not ok");
  L.note(fmt("k=%d markov=%.1e D=%.3f p0=%d", C().k, r.markov_residual_max, C().D, C().p0));
}

// ---------------------------------------------------------------- criterion 2
void c02(Line& L) {
  const GroupPreset& p = P();
  const MarkovCoding& c = C();
  LinearRep ad = adjoint_rep(p);
  auto signs = spin_structures(p)[0];
  LinearRep chi = spin_lift(p, signs);
  LinearRep s2 = sym_power_rep(p, 2);
  LinearRep s3 = sym_power_rep(p, 3, &signs);
  Moebius cdef(cplx(1.4, -0.3), cplx(0.8, 0.5));
  LinearRep rho = conjugate_deformation(p, cdef);

  double e_der = 0, e_ad = 0, e_s2 = 0, e_s3 = 0, e_psi = 0;
  long total = 0;
  for (int n = 1; n <= 6; ++n) {
    enumerate_cylinders(c, &rho, n, true, [&](const Cylinder& cyl) {
      ++total;
      e_der = std::max(e_der, std::fabs(cyl.deriv_at_fixed - std::exp(-cyl.ell)));
      std::vector<int> labs;
      for (int arc : cyl.word) labs.push_back(p.inverse_label[c.branch_of[arc]]);
      // traces grow like e^{k ell/2}: compare relative to the oracle size
      cplx o_ad = 1.0 + 2.0 * std::cosh(cyl.ell);
      e_ad = std::max(e_ad,
                      std::abs(ad.evaluate(labs).trace() - o_ad) / std::abs(o_ad));
      // spin eigenvalue mu with |mu| >= 1 from the lifted trace
      cplx t = chi.evaluate(labs).trace();
      cplx mu = 0.5 * (t + std::sqrt(t * t - 4.0));
      if (std::abs(mu) < 1.0) mu = 1.0 / mu;
      cplx m2 = mu * mu, m3 = m2 * mu;
      cplx o2 = m2 + 1.0 + 1.0 / m2, o3 = m3 + mu + 1.0 / mu + 1.0 / m3;
      e_s2 = std::max(e_s2, std::abs(s2.evaluate(labs).trace() - o2) / std::abs(o2));
      e_s3 = std::max(e_s3, std::abs(s3.evaluate(labs).trace() - o3) / std::abs(o3));
      e_psi = std::max(e_psi, std::fabs(busemann_weight_sum(c, rho, cyl.word) - cyl.ell_rho));
    });
  }
  L.req(e_der <= 1e-9, fmt("derivative identity %.2e", e_der));
  L.req(e_ad <= 1e-8, fmt("adjoint trace %.2e", e_ad));
  L.req(e_s2 <= 1e-8, fmt("sym2 trace %.2e", e_s2));
  L.req(e_s3 <= 1e-8, fmt("sym3 trace %.2e", e_s3));
  L.req(e_psi <= 1e-7, fmt("psi cocycle %.2e", e_psi));
  L.note(fmt("%ld closed cylinders, worst: der=%.1e ad=%.1e sym=%.1e psi=%.1e", total,
             e_der, e_ad, std::max(e_s2, e_s3), e_psi));
}

// ---------------------------------------------------------------- criterion 3
void c03(Line& L) {
  const MarkovCoding& c = C();
  LinearRep ad = adjoint_rep(P());
  auto signs = spin_structures(P())[0];
  LinearRep chi = spin_lift(P(), signs);
  LinearRep s3 = sym_power_rep(P(), 3, &signs);
  LinearRep iddef = conjugate_deformation(P(), Moebius::identity());

  double d_tr = critical_exponent(c, nullptr, 0.0, false, 10);
  double d_ad = critical_exponent(c, &ad, 1.0, false, 10);
  double d_sp = critical_exponent(c, &chi, 0.5, false, 10);
  double d_s3 = critical_exponent(c, &s3, 1.5, false, 10);
  double d0_id = critical_exponent(c, &iddef, 0.0, true, 10);
  L.req(std::fabs(d_tr - 1.0) <= 0.01, fmt("delta(trivial)=%.4f", d_tr));
  L.req(std::fabs(d_ad - 2.0) <= 0.02, fmt("delta(Ad)=%.4f", d_ad));
  L.req(std::fabs(d_sp - 1.5) <= 0.02, fmt("delta(spin)=%.4f", d_sp));
  L.req(std::fabs(d_s3 - 2.5) <= 0.03, fmt("delta(sym3)=%.4f", d_s3));
  L.req(std::fabs(d0_id - 0.5) <= 0.02, fmt("delta0(id)=%.4f", d0_id));

  // delta/2 < delta0 < delta; strict separation requires beta > 0, for the
  // beta = 0 family delta0 = delta/2 exactly so we check closeness instead
  struct Case { const char* name; const LinearRep* rep; double beta, delta; };
  LinearRep* reps[3] = {&chi, &ad, &s3};
  Case cases[3] = {{"spin", &chi, 0.5, d_sp}, {"Ad", &ad, 1.0, d_ad}, {"sym3", &s3, 1.5, d_s3}};
  (void)reps;
  for (const Case& cs : cases) {
    double d0 = critical_exponent(c, cs.rep, cs.beta, true, 10);
    L.req(std::fabs(d0 - (0.5 + cs.beta)) <= 0.02, fmt("delta0(%s)=%.4f", cs.name, d0));
    L.req(cs.delta / 2 < d0 && d0 < cs.delta,
          fmt("%s: delta/2=%.3f delta0=%.3f delta=%.3f", cs.name, cs.delta / 2, d0, cs.delta));
  }
  L.req(d0_id < d_tr && std::fabs(d0_id - d_tr / 2) <= 0.02,
        fmt("id: delta0=%.3f vs delta/2=%.3f", d0_id, d_tr / 2));
  L.note(fmt("delta: tr=%.3f ad=%.3f spin=%.3f sym3=%.3f delta0(id)=%.3f", d_tr, d_ad,
             d_sp, d_s3, d0_id));
}

// ---------------------------------------------------------------- criterion 4
void c04(Line& L) {
  Moebius cdef(cplx(1.4, -0.3), cplx(0.8, 0.5));
  LinearRep rho = conjugate_deformation(P(), cdef);
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  auto curve = manhattan_curve(C(), &rho, grid, 10);
  double worst = 0;
  for (auto& [a, b] : curve) worst = std::max(worst, std::fabs(a + b - 1.0));
  L.req(worst <= 0.01, fmt("line deviation %.4f", worst));
  double conv = 0;
  for (size_t i = 1; i + 1 < curve.size(); ++i)
    conv = std::min(conv, curve[i + 1].second + curve[i - 1].second - 2 * curve[i].second);
  L.req(conv >= -1e-6, fmt("convexity defect %.2e", conv));
  L.req(std::fabs(curve.front().first) <= 1e-12 && std::fabs(curve.front().second - 1) <= 0.01,
        fmt("endpoint (0,%.4f)", curve.front().second));
  L.req(std::fabs(curve.back().first - 1) <= 1e-12 && std::fabs(curve.back().second) <= 0.01,
        fmt("endpoint (1,%.4f)", curve.back().second));
  L.note(fmt("11 points, max|a+b-1|=%.4f", worst));
}

// ---------------------------------------------------------------- criterion 5
cplx euler_signed(cplx s, const ZetaClassSet& cs, double Lmax) {
  cplx acc = 1.0;
  for (const auto& cd : cs.classes) {
    if (cd.ell > Lmax) continue;
    double chi = 1.0, best = 0.0;
    for (cplx e : cd.eig)
      if (std::abs(e) > best) {
        best = std::abs(e);
        chi = e.real() >= 0 ? 1.0 : -1.0;
      }
    for (int k = 0; k < 64; ++k) {
      cplx q = chi * std::exp(-(s + (double)k) * cd.ell);
      if (std::abs(q) < 1e-14) break;
      acc *= 1.0 - q;
    }
  }
  return acc;
}

void c05(Line& L) {
  const MarkovCoding& c = C();
  const GroupPreset& p = P();
  cplx s(5, 0);
  double Lmax = 14.0;
  LinearRep ad = adjoint_rep(p);
  auto signs = spin_structures(p)[0];
  LinearRep chi = spin_lift(p, signs);
  LinearRep s3 = sym_power_rep(p, 3, &signs);

  cplx lhs = euler_product(s, &ad, c, Lmax).value;
  cplx rhs = euler_product(s - 1.0, nullptr, c, Lmax).value *
             euler_product(s, nullptr, c, Lmax).value *
             euler_product(s + 1.0, nullptr, c, Lmax).value;
  double r_ad = std::abs(lhs - rhs) / std::abs(lhs);

  const ZetaClassSet& cs_sp = zeta_classes(c, &chi, 7);
  cplx l2 = euler_product(s, &chi, c, Lmax).value;
  double r_sp = std::abs(l2 - euler_signed(s - 0.5, cs_sp, Lmax) *
                                  euler_signed(s + 0.5, cs_sp, Lmax)) /
                std::abs(l2);

  const ZetaClassSet& cs_s3 = zeta_classes(c, &s3, 7);
  cplx l3 = euler_product(s, &s3, c, Lmax).value;
  cplx pr = 1.0;
  for (int j = 0; j < 4; ++j) pr *= euler_signed(s - 1.5 + (double)j, cs_s3, Lmax);
  double r_s3 = std::abs(l3 - pr) / std::abs(l3);

  L.req(r_ad <= 1e-8, fmt("Ad residual %.2e", r_ad));
  L.req(r_sp <= 1e-8, fmt("spin residual %.2e", r_sp));
  L.req(r_s3 <= 1e-8, fmt("sym3 residual %.2e", r_s3));
  L.note(fmt("residuals ad=%.1e spin=%.1e sym3=%.1e", r_ad, r_sp, r_s3));
}

// ------------------------------------------------------- criteria 6, 8 (scans)
ZeroList g_scan_triv1, g_scan_lam1, g_scan_ad2, g_scan_ad_half, g_scan_ad_three, g_scan_spin;

void c06(Line& L) {
  const MarkovCoding& c = C();
  LinearRep ad = adjoint_rep(P());
  g_scan_triv1 = zero_scan(nullptr, c, {0.9, 1.1, -0.1, 0.1}, 0.05, 32, 1);
  L.req(g_scan_triv1.total_winding == 1, fmt("winding at s=1: %d", g_scan_triv1.total_winding));
  if (!g_scan_triv1.zeros.empty()) {
    const ZeroEntry& z = g_scan_triv1.zeros[0];
    L.req(std::abs(z.s - 1.0) <= 1e-3, fmt("|s-1|=%.2e", std::abs(z.s - 1.0)));
    L.req(z.multiplicity == 1 && z.winding_confirmed, "s=1 not simple/confirmed");
  } else {
    L.req(false, "no zero found near s=1");
  }
  ZeroList empty = zero_scan(nullptr, c, {1.1, 3.0, -1.0, 1.0}, 0.05, 32, 1);
  L.req(empty.total_winding == 0 && empty.zeros.empty(),
        fmt("spurious zeros in [1.1,3]: w=%d", empty.total_winding));
  g_scan_ad2 = zero_scan(&ad, c, {1.92, 2.08, -0.06, 0.06}, 0.05, 32, 1);
  if (!g_scan_ad2.zeros.empty()) {
    const ZeroEntry& z = g_scan_ad2.zeros[0];
    L.req(std::abs(z.s - 2.0) <= 1e-3, fmt("|s-2|=%.2e", std::abs(z.s - 2.0)));
  } else {
    L.req(false, "no Ad zero found near s=2");
  }
  L.note(fmt("s=1 w=%d, s=2 found=%zu, [1.1,3] w=0", g_scan_triv1.total_winding,
             g_scan_ad2.zeros.size()));
}

// ---------------------------------------------------------------- criterion 7
void c07(Line& L) {
  const MarkovCoding& c = C();
  double worst = 0;
  for (double sr : {4.0, 5.0, 6.0}) {
    cplx s(sr, 0);
    cplx corr = overcount_correction(s, nullptr, c);
    cplx e = euler_product(s, nullptr, c, 1e9).value;
    cplx o = fredholm_det_orbit(s, nullptr, c, 8).value / corr;
    cplx m = fredholm_det_matrix(s, nullptr, c, 0.05, 20).value / corr;
    worst = std::max({worst, std::abs(e - o) / std::abs(e), std::abs(e - m) / std::abs(e),
                      std::abs(o - m) / std::abs(o)});
  }
  L.req(worst <= 1e-6, fmt("cross-method %.2e", worst));
  double spread = 0;
  cplx s(4, 0);
  cplx d3 = fredholm_det_matrix(s, nullptr, c, 0.03, 24).value;
  cplx d5 = fredholm_det_matrix(s, nullptr, c, 0.05, 24).value;
  cplx d8 = fredholm_det_matrix(s, nullptr, c, 0.08, 24).value;
  spread = std::max({std::abs(d3 - d5), std::abs(d5 - d8), std::abs(d3 - d8)}) / std::abs(d5);
  L.req(spread <= 1e-6, fmt("h-independence %.2e", spread));
  L.note(fmt("cross=%.1e h-spread=%.1e", worst, spread));
}

// ---------------------------------------------------------------- criterion 8
void c08(Line& L) {
  const MarkovCoding& c = C();
  LinearRep ad = adjoint_rep(P());
  auto signs = spin_structures(P())[0];
  LinearRep chi = spin_lift(P(), signs);

  g_scan_lam1 = zero_scan(nullptr, c, {0.3, 0.7, 1.7, 2.1}, 0.1, 20, 1);
  g_scan_ad_three = zero_scan(&ad, c, {1.38, 1.62, 1.75, 2.02}, 0.1, 20, 1);
  g_scan_ad_half = zero_scan(&ad, c, {0.38, 0.62, 1.75, 2.02}, 0.1, 20, 1);
  g_scan_spin = zero_scan(&chi, c, {0.85, 1.15, 0.4, 2.4}, 0.1, 20, 1);

  double del_tr = rep_delta(c, nullptr), del_ad = rep_delta(c, &ad),
         del_sp = rep_delta(c, &chi);
  struct Win { const ZeroList* zl; double delta; const char* name; };
  Win wins[] = {{&g_scan_triv1, del_tr, "triv:s=1"}, {&g_scan_lam1, del_tr, "triv:lam1"},
                {&g_scan_ad2, del_ad, "ad:s=2"},     {&g_scan_ad_three, del_ad, "ad:3/2"},
                {&g_scan_ad_half, del_ad, "ad:1/2"}, {&g_scan_spin, del_sp, "spin"}};
  int checked = 0;
  for (const Win& w : wins)
    for (const auto& z : w.zl->zeros) {
      if (!z.winding_confirmed) continue;
      ++checked;
      L.req(parabola_contains({w.delta}, z.lambda + 0.02),
            fmt("%s zero %.4f%+.4fi escapes C_delta", w.name, z.s.real(), z.s.imag()));
    }
  L.req(!g_scan_lam1.zeros.empty(), "no spectral zero in the lambda_1 window");
  L.req(!g_scan_ad_three.zeros.empty(), "no Ad zero on the 3/2 line window");
  L.req(!g_scan_ad_half.zeros.empty(), "no Ad zero on the 1/2 line window");
  // Ad divisor: non-real zeros sit on Re s in {-1/2, 1/2, 3/2}
  int ad_lines = 0;
  for (const ZeroList* zl : {&g_scan_ad_three, &g_scan_ad_half, &g_scan_ad2})
    for (const auto& z : zl->zeros) {
      if (std::fabs(z.s.imag()) <= 1e-3) continue;
      double d = std::min({std::fabs(z.s.real() + 0.5), std::fabs(z.s.real() - 0.5),
                           std::fabs(z.s.real() - 1.5)});
      ++ad_lines;
      L.req(d <= 1e-3, fmt("Ad zero off the divisor lines by %.2e", d));
    }
  L.note(fmt("%d certified zeros contained, %d Ad line zeros, spin window zeros=%zu",
             checked, ad_lines, g_scan_spin.zeros.size()));
}

// ---------------------------------------------------------------- criterion 9
void c09(Line& L) {
  const MarkovCoding& c = C();
  cplx pts[5] = {{0.7, 0.3}, {0.6, -0.2}, {0.55, 0.1}, {0.65, 0.05}, {0.52, -0.25}};
  double worst = 0;
  for (cplx s : pts)
    worst = std::max(worst, functional_equation_residual(s, nullptr, c, 0.05, 20));
  L.req(worst <= 1e-3, fmt("residual %.2e", worst));
  L.note(fmt("5 points, worst residual %.1e", worst));
}

// --------------------------------------------------------------- criterion 10
void c10(Line& L) {
  double t = 0.05, Lmax = 14.0;
  cplx g = heat_trace_geometric(t, nullptr, C(), Lmax);
  double lead = 4.0 * M_PI / (4.0 * M_PI * t);  // dim Vol/(4 pi t), Vol = 4 pi
  double ratio = g.real() / lead;
  // classes beyond Lmax: counted by e^{ell}, each damped by e^{-ell^2/(4t)}
  double tail = std::exp(Lmax - Lmax * Lmax / (4.0 * t));
  L.req(ratio >= 0.95 && ratio <= 1.05, fmt("ratio %.4f", ratio));
  L.req(tail < 1e-12, fmt("tail bound %.2e", tail));
  L.note(fmt("ratio=%.4f, Gaussian tail <= %.1e", ratio, tail));
}

// --------------------------------------------------------------- criterion 11
void c11(Line& L) {
  const MarkovCoding& c = C();
  auto signs = spin_structures(P())[0];
  LinearRep chi = spin_lift(P(), signs);
  struct Case { const LinearRep* rep; double beta; const char* name; };
  Case cases[2] = {{nullptr, 0.0, "trivial"}, {&chi, 0.5, "spin"}};
  for (const Case& cs : cases) {
    double d0 = critical_exponent(c, cs.rep, cs.beta, true, 10);
    double side[2];
    int k = 0;
    for (double sg : {d0 - 0.1, d0 + 0.1}) {
      HSReport hs = hs_diagnostic(cs.rep, c, cplx(sg, 0), 0.05, 6);
      double lhs = std::log(hs.S1) / 6.0;
      double prs = pressure(c, nullptr, {0.0, 2.0 * cs.beta - 2.0 * sg, nullptr}, 10).value;
      L.req(std::fabs(lhs - prs) <= 0.05,
            fmt("%s sigma=%.2f: logS1/n=%.4f vs P=%.4f", cs.name, sg, lhs, prs));
      side[k++] = lhs;
    }
    L.req(side[0] > 0 && side[1] < 0,
          fmt("%s: no sign flip (%.4f, %.4f)", cs.name, side[0], side[1]));
    L.note(fmt("%s: delta0=%.3f flip %.3f/%.3f", cs.name, d0, side[0], side[1]));
  }
}

// --------------------------------------------------------------- criterion 12
void c12(Line& L) {
  auto D = make_disc({0, 0}, 1.0);
  auto K = numeric_kernel(D, 80);
  std::mt19937_64 rg(11);
  auto rnd = [&](double rmax) {
    std::uniform_real_distribution<double> u(0, 1);
    return std::polar(rmax * std::sqrt(u(rg)), TWO_PI * u(rg));
  };
  double e_num = 0;
  for (int i = 0; i < 200; ++i) {
    cplx z = rnd(0.9), w = rnd(0.9);
    cplx ex = disc_kernel(z, w);
    e_num = std::max(e_num, std::abs(K.eval(z, w) - ex) / std::abs(ex));
  }
  L.req(e_num <= 1e-6, fmt("numeric disc kernel %.2e", e_num));

  double e_hyp = 0, e_apo = 0;
  for (int i = 0; i < 1000; ++i) {
    cplx z = rnd(0.95), w = rnd(0.95);
    double rho = disc_distance(z, w);
    double rhs = disc_density(z) * disc_density(w) /
                 (4.0 * M_PI * std::pow(std::cosh(rho / 2), 2));
    e_hyp = std::max(e_hyp, std::fabs(std::abs(disc_kernel(z, w)) - rhs) / rhs);
    double a = apollonian(D, z, w);
    if (a > 2 * rho + 1e-9) e_apo = std::max(e_apo, a - 2 * rho);
  }
  L.req(e_hyp <= 1e-12, fmt("kernel-density identity %.2e", e_hyp));
  L.req(e_apo == 0.0, fmt("apollonian excess %.2e", e_apo));

  auto tb = tube_bound_check(0.0, 0.3, {0.1, 0.05, 0.025}, 0.5, 0.5);
  L.req(tb.diag_ratio <= 2.0, fmt("tube diag ratio %.3f", tb.diag_ratio));
  L.req(tb.offdiag_slope >= -1.7, fmt("off-diagonal slope %.3f", tb.offdiag_slope));
  L.note(fmt("disc=%.1e identity=%.1e apollonian ok, tube ratio=%.2f slope=%.2f", e_num,
             e_hyp, tb.diag_ratio, tb.offdiag_slope));
}

// --------------------------------------------------------------- criterion 13
void c13(Line& L) {
  const MarkovCoding& c = C();
  LinearRep ad = adjoint_rep(P());
  double T = 60.0;
  ZeroList tr = zero_scan(nullptr, c, {0.42, 1.1, -0.25, 7.78}, 0.1, 20, 3);
  WeylReport wt = weyl_compare(tr, nullptr, c, T);
  L.req(wt.ratio >= 0.7 && wt.ratio <= 1.3,
        fmt("trivial ratio %.3f (obs %d, pred %.0f)", wt.ratio, wt.observed, wt.predicted));
  ZeroList az = zero_scan(&ad, c, {0.42, 2.05, -0.25, 7.78}, 0.1, 16, 3);
  WeylReport wa = weyl_compare(az, &ad, c, T);
  double rel = wa.observed / (3.0 * wt.observed);
  L.req(std::fabs(rel - 1.0) <= 0.15,
        fmt("Ad/3x-trivial = %.3f (obs %d vs 3x%d)", rel, wa.observed, wt.observed));
  L.note(fmt("trivial %d/%.0f=%.2f, Ad %d vs 3x%d (%.2f)", wt.observed, wt.predicted,
             wt.ratio, wa.observed, wt.observed, rel));
}

}  // namespace

int main(int argc, char** argv) {
  setenv("HYPERZETA_CACHE_DIR", "/tmp/hz_cache_acceptance", 0);
  std::set<int> which;
  for (int i = 1; i < argc; ++i) which.insert(std::atoi(argv[i]));
  void (*fns[13])(Line&) = {c01, c02, c03, c04, c05, c06, c07,
                            c08, c09, c10, c11, c12, c13};
  const char* names[13] = {
      "coding validity",        "per-orbit identities", "critical exponents",
      "Manhattan line",         "zeta factorizations",  "determinant zeros",
      "cross-method agreement", "parabola containment", "functional equation",
      "heat trace small-t",     "HS mechanism",         "Bergman suite",
      "Weyl comparison"};
  int fails = 0;
  for (int i = 0; i < 13; ++i) {
    if (!which.empty() && !which.count(i + 1)) continue;
    Line L;
    auto t0 = std::chrono::steady_clock::now();
    try {
      fns[i](L);
    } catch (const std::exception& e) {
      L.req(false, std::string("exception: ") + e.what());
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    printf("C%02d %s — %s: %s (%.1f s)\n", i + 1, L.pass ? "PASS" : "FAIL", names[i],
           L.detail.c_str(), dt);
    fflush(stdout);
    if (!L.pass) ++fails;
  }
  return fails;
}
