#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <random>

#include "doctest.h"
#include "hz/thermo.hpp"

using namespace hz;

static const GroupPreset& P() {
  static GroupPreset p = octagon_preset();
  return p;
}
static const MarkovCoding& C() {
  static MarkovCoding c = [] {
    setenv("HYPERZETA_CACHE_DIR", "/tmp/hz_cache_test", 0);
    return build_bowen_series(P());
  }();
  return c;
}

static std::vector<Cylinder> closed_words(int n) {
  std::vector<Cylinder> out;
  LinearRep ad = adjoint_rep(P());
  enumerate_cylinders(C(), &ad, n, true, [&](const Cylinder& cyl) { out.push_back(cyl); });
  return out;
}

TEST_CASE("weight_on_orbit: exact combinations of ell and ell_rho") {
  auto cls = closed_words(3);
  REQUIRE(!cls.empty());
  for (const auto& cyl : cls) {
    CHECK(weight_on_orbit(cyl, {0.0, 1.0}) == doctest::Approx(cyl.ell).epsilon(1e-12));
    CHECK(std::fabs(weight_on_orbit(cyl, {1.0, 0.0}) - cyl.ell) < 1e-10);  // identity: psi=tau
    CHECK(weight_on_orbit(cyl, {0.7, -1.3}) ==
          doctest::Approx(0.7 * cyl.ell_rho - 1.3 * cyl.ell).epsilon(1e-12));
  }
  // conjugate deformation preserves the length spectrum
  Moebius cdef(cplx(1.4, -0.3), cplx(0.8, 0.5));
  LinearRep rho = conjugate_deformation(P(), cdef);
  std::vector<Cylinder> defd;
  enumerate_cylinders(C(), &rho, 3, true, [&](const Cylinder& cyl) { defd.push_back(cyl); });
  for (size_t i = 0; i < defd.size(); ++i)
    CHECK(std::fabs(weight_on_orbit(defd[i], {1.0, 0.0}) - defd[i].ell) < 1e-9);
  // non-closed cylinder rejected
  Cylinder open;
  enumerate_cylinders(C(), nullptr, 2, false, [&](const Cylinder& cyl) {
    if (!C().A[cyl.word[1]][cyl.word[0]] && open.word.empty()) open = cyl;
  });
  REQUIRE(!open.word.empty());
  CHECK_THROWS_AS(weight_on_orbit(open, {0.0, 1.0}), NotClosed);
}

TEST_CASE("busemann_weight_sum: Birkhoff sums of psi reproduce ell_rho") {
  const MarkovCoding& c = C();
  LinearRep id = conjugate_deformation(P(), Moebius::identity());
  Moebius cdef(cplx(1.6, 0.2), cplx(-0.7, 0.9));
  LinearRep rho = conjugate_deformation(P(), cdef);

  // identity deformation: psi = tau, sum = ell
  for (const auto& cyl : closed_words(3))
    CHECK(std::fabs(busemann_weight_sum(c, id, cyl.word) - cyl.ell) < 1e-7);

  // conjugate deformation: sum = ell_rho (trace-formula oracle) on random closed words
  std::mt19937_64 rg(5);
  int tested = 0;
  for (int n = 2; n <= 6 && tested < 20; ++n) {
    std::vector<Cylinder> cls;
    enumerate_cylinders(c, &rho, n, true, [&](const Cylinder& cyl) {
      if (rg() % 97 < 5 && cls.size() < 7) cls.push_back(cyl);
    });
    for (const auto& cyl : cls) {
      double oracle = cyl.ell_rho;
      CHECK(std::fabs(busemann_weight_sum(c, rho, cyl.word) - oracle) < 1e-7);
      ++tested;
    }
  }
  CHECK(tested >= 20);

  // non-closed word: telescoped sum equals one-shot Busemann of the composed word
  std::vector<int> open;
  enumerate_cylinders(c, nullptr, 4, false, [&](const Cylinder& cyl) {
    if (open.empty() && !c.A[cyl.word[3]][cyl.word[0]]) open = cyl.word;
  });
  REQUIRE(!open.empty());
  {
    Moebius pre = Moebius::identity();
    for (int t = 0; t + 1 < (int)open.size(); ++t) pre = compose(pre, c.inverse_branch(open[t]));
    double x = norm_angle(std::arg(pre.apply(std::polar(1.0, c.arc_mid(open.back())))));
    Moebius w = Moebius::identity();  // gamma_{i_n} ... gamma_{i_1}
    for (int t = 0; t < (int)open.size(); ++t)
      w = compose(P().gen(c.branch_of[open[t]]), w);
    Moebius rw = compose(compose(cdef, w), cdef.inverse());
    double xi = norm_angle(std::arg(cdef.apply(std::polar(1.0, x))));
    double oneshot = busemann(xi, cplx(0, 0), rw.inverse().apply(cplx(0, 0)));
    CHECK(std::fabs(busemann_weight_sum(c, rho, open) - oneshot) < 1e-9);
  }

  LinearRep ad = adjoint_rep(P());
  CHECK_THROWS_AS(busemann_weight_sum(c, ad, {0, 1}), NoBoundaryMap);
}

TEST_CASE("pressure: zero weight gives the word-growth rate") {
  const MarkovCoding& c = C();
  PressureEstimate est = pressure(c, nullptr, {0.0, 0.0}, 10);
  // oracle: power iteration on the transition matrix, independent of the report
  std::vector<double> v(c.k, 1.0);
  double lam = 0.0;
  for (int it = 0; it < 400; ++it) {
    std::vector<double> w(c.k, 0.0);
    for (int j = 0; j < c.k; ++j)
      for (int i : c.succ[j]) w[j] += v[i];
    lam = 0.0;
    for (double x : w) lam = std::max(lam, x);
    for (int j = 0; j < c.k; ++j) v[j] = w[j] / lam;
  }
  CHECK(est.value == doctest::Approx(std::log(lam)).epsilon(1e-6));
  CHECK(est.n_used == 10);
  // per-level sanity: recorded untruncated, last three within 3x error bound
  REQUIRE(est.per_level.size() >= 3);
  size_t np = est.per_level.size();
  for (size_t i = np - 3; i < np; ++i)
    for (size_t j = i; j < np; ++j)
      CHECK(std::fabs(est.per_level[i].second - est.per_level[j].second) <
            3.0 * est.error_bound);
  CHECK_THROWS_AS(pressure(c, nullptr, {0.0, 0.0}, 13), CapExceeded);
}

TEST_CASE("pressure: normalization and shift identity") {
  const MarkovCoding& c = C();
  // P(-tau) ~ 0: the trivial critical exponent is 1
  PressureEstimate p1 = pressure(c, nullptr, {0.0, -1.0}, 10);
  CHECK(std::fabs(p1.value) < 1e-2);
  // identity deformation: psi = tau so (1, -s) and (0, 1-s) agree
  LinearRep id = conjugate_deformation(P(), Moebius::identity());
  for (double s : {0.7, 1.0, 1.9}) {
    double a = pressure(c, &id, {1.0, -s}, 8).value;
    double b = pressure(c, nullptr, {0.0, 1.0 - s}, 8).value;
    CHECK(std::fabs(a - b) < 1e-9);
  }
  // strictly decreasing in sigma
  double prev = 1e18;
  for (double s = 0.0; s <= 3.01; s += 0.5) {
    double v = pressure(c, nullptr, {0.0, -s}, 8).value;
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("critical exponents of the shipped representations") {
  const MarkovCoding& c = C();
  double d_triv = critical_exponent(c, nullptr, 0.0);
  CHECK(d_triv == doctest::Approx(1.0).epsilon(0.01));
  LinearRep ad = adjoint_rep(P());
  double d_ad = critical_exponent(c, &ad, 1.0);
  CHECK(d_ad == doctest::Approx(2.0).epsilon(0.01));
  LinearRep chi = spin_lift(P(), spin_structures(P())[0]);
  double d_spin = critical_exponent(c, &chi, 0.5);
  CHECK(d_spin == doctest::Approx(1.5).epsilon(0.014));
  // doubled exponent, identity deformation: delta0 = 1/2 + beta
  double d0_spin = critical_exponent(c, &chi, 0.5, true);
  CHECK(d0_spin == doctest::Approx(1.0).epsilon(0.02));
  double d0_ad = critical_exponent(c, &ad, 1.0, true);
  CHECK(d0_ad == doctest::Approx(1.5).epsilon(0.014));
  // sym^3 (beta = 3/2): delta = 1 + n/2
  LinearRep s3 = sym_power_rep(P(), 3, &spin_structures(P())[0]);
  double d_s3 = critical_exponent(c, &s3, 1.5);
  CHECK(d_s3 == doctest::Approx(2.5).epsilon(0.012));
  double d0_s3 = critical_exponent(c, &s3, 1.5, true);
  CHECK(d0_s3 == doctest::Approx(2.0).epsilon(0.01));
  // strict orderings delta/2 < delta0 < delta (with root tolerances)
  CHECK(d0_ad < d_ad - 1e-3);
  CHECK(d0_ad > d_ad / 2 + 1e-3);
  CHECK(d0_spin < d_spin - 1e-3);
  CHECK(d0_spin > d_spin / 2 + 1e-3);
}

TEST_CASE("manhattan curve: line for conjugate deformations") {
  const MarkovCoding& c = C();
  Moebius cdef(cplx(1.3, 0.6), cplx(0.4, -0.7));
  LinearRep rho = conjugate_deformation(P(), cdef);
  std::vector<double> grid;
  for (double a = -0.5; a <= 1.01; a += 0.25) grid.push_back(a);
  auto curve = manhattan_curve(c, &rho, grid);
  REQUIRE(curve.size() == grid.size());
  for (const auto& [a, b] : curve) CHECK(std::fabs(a + b - 1.0) <= 0.01);
  // endpoints (0,1) and (1,0)
  for (const auto& [a, b] : curve) {
    if (std::fabs(a) < 1e-9) CHECK(b == doctest::Approx(1.0).epsilon(0.01));
    if (std::fabs(a - 1.0) < 1e-9) CHECK(std::fabs(b) < 0.01);
  }
  // convexity of discrete second differences
  for (size_t i = 0; i + 2 < curve.size(); ++i)
    CHECK(curve[i].second - 2 * curve[i + 1].second + curve[i + 2].second >= -1e-3);
  // delta read off at a = -beta matches the root finder (beta = 1/2 here)
  double d_curve = curve[0].second;  // a = -0.5
  CHECK(d_curve == doctest::Approx(critical_exponent(c, &rho, 0.5)).epsilon(0.02));
}

TEST_CASE("geodesic stretch") {
  const MarkovCoding& c = C();
  Moebius cdef(cplx(1.5, -0.2), cplx(0.3, 1.0));
  LinearRep rho = conjugate_deformation(P(), cdef);
  StretchResult s6 = geodesic_stretch(c, &rho, 6);
  CHECK(std::fabs(s6.i_minus - 1.0) < 1e-9);
  CHECK(std::fabs(s6.i_plus - 1.0) < 1e-9);
  CHECK(s6.n_max == 6);
  StretchResult s2 = geodesic_stretch(c, &rho, 2);
  CHECK(s2.i_minus >= s6.i_minus - 1e-12);  // nested as the class set grows
  CHECK(s2.i_plus <= s6.i_plus + 1e-12);
  // sandwich: delta/2 + (beta/2) I- <= delta0 <= delta/2 + (beta/2) I+
  LinearRep chi = spin_lift(P(), spin_structures(P())[0]);
  double beta = 0.5;
  double d = critical_exponent(c, &chi, beta);
  double d0 = critical_exponent(c, &chi, beta, true);
  StretchResult st = geodesic_stretch(c, &chi, 6);
  CHECK(d / 2 + beta / 2 * st.i_minus <= d0 + 0.02);
  CHECK(d0 <= d / 2 + beta / 2 * st.i_plus + 0.02);
}
