#include "hz/coding.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <limits>
#include <map>
#include <numeric>

namespace hz {

int MarkovCoding::arc_of(double theta) const {
  theta = norm_angle(theta);
  auto it = std::upper_bound(pts.begin(), pts.end(), theta);
  if (it == pts.begin()) return k - 1;  // below first endpoint -> wrap arc
  return int(it - pts.begin()) - 1;
}

double MarkovCoding::T_apply(double theta) const {
  int j = arc_of(theta);
  const Moebius& g = preset->gen(branch_of[j]);
  return norm_angle(std::arg(g.apply(std::polar(1.0, theta))));
}

double MarkovCoding::T_derivative(double theta) const {
  int j = arc_of(theta);
  return boundary_derivative(preset->gen(branch_of[j]), theta);
}

std::uint64_t MarkovCoding::hash() const {
  std::uint64_t h = preset_hash;
  h = fnv1a(pts.data(), pts.size() * sizeof(double), h);
  h = fnv1a(branch_of.data(), branch_of.size() * sizeof(int), h);
  return h;
}

namespace {

struct Shadow {
  double lo, hi, center;
};

// shadow of side m: boundary arc cut out by the isometric circle of gen[m]^-1
std::vector<Shadow> side_shadows(const GroupPreset& p) {
  std::vector<Shadow> sh;
  int n = (int)p.gens.size();
  for (int m = 0; m < n; ++m) {
    auto [c, r] = isometric_circle(p.gen(p.inverse_label[m]));
    double cc = std::abs(c);
    double phi = std::acos((1.0 + cc * cc - r * r) / (2.0 * cc));
    double th = std::arg(c);
    sh.push_back({norm_angle(th - phi), norm_angle(th + phi), norm_angle(th)});
  }
  return sh;
}

// generator whose shadow contains theta, preferring the nearest shadow center
int shadow_branch(const std::vector<Shadow>& sh, double theta) {
  int best = -1;
  double bd = 1e18;
  for (size_t m = 0; m < sh.size(); ++m) {
    if (norm_angle(theta - sh[m].lo) <= arc_len(sh[m].lo, sh[m].hi) + 1e-12) {
      double d = angle_dist(theta, sh[m].center);
      if (d < bd) {
        bd = d;
        best = (int)m;
      }
    }
  }
  if (best < 0) throw CodingConstructionFailed("boundary point not covered by any shadow");
  return best;
}

bool insert_pt(std::vector<double>& pts, double t, double tol = 1e-9) {
  for (double q : pts)
    if (angle_dist(q, t) < tol) return false;
  pts.push_back(t);
  return true;
}

double dist_to_arc(cplx z, double lo, double hi) {
  double th = norm_angle(std::arg(z));
  if (norm_angle(th - lo) <= arc_len(lo, hi))
    return std::abs(z - std::polar(1.0, th));
  return std::min(std::abs(z - std::polar(1.0, lo)), std::abs(z - std::polar(1.0, hi)));
}

}  // namespace

double tube_inclusion_margin(const MarkovCoding& c, double h) {
  double worst = 1e18;
  const int NS = 48, NO = 24;
  for (int j = 0; j < c.k; ++j) {
    Moebius v = c.inverse_branch(j);
    double hj = h * c.width_weight[j];
    for (int i : c.succ[j]) {
      double hi_w = h * c.width_weight[i];
      double lo = c.arc_lo(i), len = arc_len(c.arc_lo(i), c.arc_hi(i));
      for (int t = 0; t < NS; ++t) {
        cplx spine = std::polar(1.0, lo + len * t / double(NS - 1));
        for (int o = 0; o < NO; ++o) {
          cplx z = spine + hi_w * std::polar(1.0, TWO_PI * o / NO);
          double d = dist_to_arc(v.apply(z), c.arc_lo(j), c.arc_hi(j));
          worst = std::min(worst, hj - d);
        }
      }
    }
  }
  return worst;
}

MarkovCoding build_bowen_series(const GroupPreset& preset) {
  preset.validate();
  auto sh = side_shadows(preset);
  int nsides = (int)preset.gens.size();

  // seed cut points: one per overlap of adjacent shadows, at the polygon-vertex angle
  std::vector<double> pts;
  for (int m = 0; m < nsides; ++m)
    pts.push_back(norm_angle((m + 0.5) * TWO_PI / nsides));
  std::sort(pts.begin(), pts.end());

  // close the endpoint set under per-arc branch images
  auto T_of = [&](int m, double th) {
    const Moebius& g = preset.gen(preset.inverse_label[m]);  // T = action of m's inverse
    return norm_angle(std::arg(g.apply(std::polar(1.0, th))));
  };
  bool closed = false;
  for (int iter = 0; iter < 64 && !closed; ++iter) {
    std::vector<double> P = pts;
    std::sort(P.begin(), P.end());
    closed = true;
    int kk = (int)P.size();
    for (int j = 0; j < kk; ++j) {
      double a = P[j], b = P[(j + 1) % kk];
      double mid = norm_angle(a + 0.5 * arc_len(a, b));
      int m = shadow_branch(sh, mid);
      if (insert_pt(pts, T_of(m, a))) closed = false;
      if (insert_pt(pts, T_of(m, b))) closed = false;
    }
  }
  if (!closed) throw CodingConstructionFailed("endpoint set did not close under T");
  std::sort(pts.begin(), pts.end());

  MarkovCoding c;
  c.preset = &preset;
  c.preset_hash = preset.hash();
  c.pts = pts;
  c.k = (int)pts.size();
  for (int j = 0; j < c.k; ++j) {
    int m = shadow_branch(sh, c.arc_mid(j));
    c.branch_of.push_back(preset.inverse_label[m]);  // T applies gen[m]^-1
  }

  // transition matrix + Markov alignment
  c.A.assign(c.k, std::vector<char>(c.k, 0));
  c.succ.assign(c.k, {});
  double mres = 0.0;
  for (int j = 0; j < c.k; ++j) {
    const Moebius& g = preset.gen(c.branch_of[j]);
    double ta = norm_angle(std::arg(g.apply(std::polar(1.0, c.arc_lo(j)))));
    double tb = norm_angle(std::arg(g.apply(std::polar(1.0, c.arc_hi(j)))));
    double da = 1e18, db = 1e18;
    for (double q : pts) {
      da = std::min(da, angle_dist(ta, q));
      db = std::min(db, angle_dist(tb, q));
    }
    mres = std::max(mres, std::max(da, db));
    double width = arc_len(ta, tb);
    for (int i = 0; i < c.k; ++i) {
      if (norm_angle(c.arc_mid(i) - ta) < width) {
        c.A[j][i] = 1;
        c.succ[j].push_back(i);
      }
    }
  }
  c.report.k = c.k;
  c.report.markov_residual_max = mres;
  if (mres > 1e-9)
    throw CodingConstructionFailed("Markov endpoint alignment failed, residual " +
                                   std::to_string(mres));

  // expansion
  double m1 = 1e18, m2 = 1e18;
  const int NSAMP = 20011;
  for (int t = 0; t < NSAMP; ++t) {
    double th = TWO_PI * t / NSAMP;
    double d1 = c.T_derivative(th);
    double th1 = c.T_apply(th);
    double d2 = c.T_derivative(th1);
    m1 = std::min(m1, d1);
    m2 = std::min(m2, d1 * d2);
  }
  c.report.expansion_one_step = m1;
  c.report.expansion_two_step = m2;
  c.D = m2;
  if (m2 <= 1.0) throw CodingConstructionFailed("two-step expansion bound not > 1");

  // mixing exponent
  std::vector<std::vector<char>> M = c.A;
  int p0 = 0;
  for (int p = 1; p <= 12; ++p) {
    bool all = true;
    for (auto& row : M)
      for (char v : row)
        if (!v) { all = false; break; }
    if (all) { p0 = p; break; }
    std::vector<std::vector<char>> N(c.k, std::vector<char>(c.k, 0));
    for (int a = 0; a < c.k; ++a)
      for (int b = 0; b < c.k; ++b)
        if (M[a][b])
          for (int d = 0; d < c.k; ++d)
            if (c.A[b][d]) N[a][d] = 1;
    M = N;
  }
  if (p0 == 0 || p0 > 8) throw CodingConstructionFailed("mixing exponent p0 not <= 8");
  c.p0 = p0;
  c.report.mixing_exponent = p0;

  // word growth rate (power iteration on A)
  {
    std::vector<double> v(c.k, 1.0), w(c.k);
    double lam = 0.0;
    for (int it = 0; it < 200; ++it) {
      for (int a = 0; a < c.k; ++a) {
        double s = 0.0;
        for (int b : c.succ[a]) s += v[b];
        w[a] = s;
      }
      lam = *std::max_element(w.begin(), w.end());
      for (int a = 0; a < c.k; ++a) v[a] = w[a] / lam;
    }
    c.report.lambda1 = lam;
  }

  // tube width weights from edge contraction factors (measured at h_ref)
  const double h_ref = 0.08;
  std::vector<std::vector<double>> logk(c.k, std::vector<double>(c.k, -1e18));
  for (int j = 0; j < c.k; ++j) {
    Moebius v = c.inverse_branch(j);
    for (int i : c.succ[j]) {
      double lo = c.arc_lo(i), len = arc_len(c.arc_lo(i), c.arc_hi(i));
      double sup = 0.0;
      const int NS = 32, NO = 16;
      for (int t = 0; t < NS; ++t) {
        cplx spine = std::polar(1.0, lo + len * t / double(NS - 1));
        for (int o = 0; o < NO; ++o) {
          cplx z = spine + h_ref * std::polar(1.0, TWO_PI * o / NO);
          sup = std::max(sup, dist_to_arc(v.apply(z), c.arc_lo(j), c.arc_hi(j)));
        }
      }
      logk[j][i] = std::log(sup / h_ref);
    }
  }
  // max-plus fixed point: x_j >= logk[j][i] + margin + x_i
  std::vector<double> x(c.k, 0.0);
  const double margin = std::log(1.04);
  for (int it = 0; it < 400; ++it) {
    bool moved = false;
    for (int j = 0; j < c.k; ++j) {
      double need = -1e18;
      for (int i : c.succ[j]) need = std::max(need, logk[j][i] + margin + x[i]);
      if (need > x[j] + 1e-12) {
        x[j] = need;
        moved = true;
      }
    }
    if (!moved) break;
    if (it == 399) throw CodingConstructionFailed("tube width weights did not converge");
  }
  double xmax = *std::max_element(x.begin(), x.end());
  c.width_weight.resize(c.k);
  for (int j = 0; j < c.k; ++j) c.width_weight[j] = std::exp(x[j] - xmax);

  // h_max: largest tested h with verified strict one-step inclusion
  c.h_max = 0.0;
  for (double h : {0.10, 0.09, 0.085, 0.08}) {
    if (tube_inclusion_margin(c, h) > 0) {
      c.h_max = h;
      break;
    }
  }
  if (c.h_max == 0.0) throw CodingConstructionFailed("no usable tube half-width found");
  c.report.h_max = c.h_max;

  // n0: first depth with worst-case depth-n contraction <= 1/2 of the target width
  {
    // max-plus powers of logk with weight adjustment
    std::vector<std::vector<double>> cur = logk;
    int n0 = 0;
    for (int n = 1; n <= 24; ++n) {
      double worst = -1e18;
      for (int j = 0; j < c.k; ++j)
        for (int i = 0; i < c.k; ++i)
          if (cur[j][i] > -1e17)
            worst = std::max(worst, cur[j][i] + std::log(c.width_weight[i]) -
                                        std::log(c.width_weight[j]));
      if (worst <= -std::log(2.0)) {
        n0 = n;
        break;
      }
      std::vector<std::vector<double>> nxt(c.k, std::vector<double>(c.k, -1e18));
      for (int j = 0; j < c.k; ++j)
        for (int b = 0; b < c.k; ++b)
          if (cur[j][b] > -1e17)
            for (int i : c.succ[b])
              nxt[j][i] = std::max(nxt[j][i], cur[j][b] + logk[b][i]);
      cur = nxt;
    }
    if (n0 == 0) throw CodingConstructionFailed("n0 not found within depth 24");
    c.n0 = n0;
    c.report.n0 = n0;
  }

  c.report.cover_gap_max = 0.0;  // arcs partition S^1 by construction (sorted endpoints)
  c.report.ok = true;
  return c;
}

void enumerate_cylinders(const MarkovCoding& c, const LinearRep* rep, int n, bool closed_only,
                         const std::function<void(const Cylinder&)>& sink, int cap) {
  if (n < 1) throw DomainError("enumerate_cylinders: n >= 1");
  if (n > cap) throw CapExceeded("enumerate_cylinders: n exceeds cap");
  std::vector<int> word(n);
  std::vector<Moebius> prefix(n + 1);  // prefix[t] = v_{w1} ... v_{wt}
  prefix[0] = Moebius::identity();
  Cylinder cyl;

  // iterative lexicographic DFS
  std::vector<int> choice(n, -1);
  int depth = 0;
  while (depth >= 0) {
    int next = ++choice[depth];
    if (depth == 0) {
      if (next >= c.k) {
        --depth;
        continue;
      }
      word[0] = next;
    } else {
      const auto& s = c.succ[word[depth - 1]];
      if (next >= (int)s.size()) {
        choice[depth] = -1;
        --depth;
        continue;
      }
      word[depth] = s[next];
    }
    prefix[depth + 1] = compose(prefix[depth], c.inverse_branch(word[depth]));
    if (depth + 1 == n) {
      bool closed = c.A[word[n - 1]][word[0]];
      if (!closed_only || closed) {
        cyl.word = word;
        cyl.g = prefix[n];
        cyl.primitive_period = n;
        for (int p = 1; p < n; ++p) {
          if (n % p) continue;
          bool per = true;
          for (int t = 0; per && t + p < n; ++t) per = word[t] == word[t + p];
          if (per) {
            cyl.primitive_period = p;
            break;
          }
        }
        cyl.x_minus = std::numeric_limits<double>::quiet_NaN();
        cyl.deriv_at_fixed = 0.0;
        cyl.ell = 0.0;
        cyl.ell_rho = 0.0;
        if (closed && cyl.g.is_hyperbolic()) {
          auto [xm, xp] = fixed_points(cyl.g);
          cyl.x_minus = xm;
          cyl.deriv_at_fixed = boundary_derivative(cyl.g, xm);
          cyl.ell = translation_length(cyl.g);
          cyl.ell_rho = rep ? ell_rho_of(*c.preset, *rep, cyl.g) : cyl.ell;
        }
        sink(cyl);
      }
      continue;  // stay at same depth, try next sibling
    }
    ++depth;
  }
}

static bool words_equal_cyclic(const std::vector<int>& a, int shift, const std::vector<int>& b) {
  int n = (int)a.size();
  for (int t = 0; t < n; ++t)
    if (a[(t + shift) % n] != b[t]) return false;
  return true;
}

bool conjugate_in_group(const GroupPreset& p, const Moebius& g1, const Moebius& g2, int max_len) {
  // u g1 u^-1 = g2 in PSU(1,1) iff u g1 = +- g2 u; the product form avoids
  // the catastrophic cancellation of conjugating large hyperbolic elements.
  // Raw (a,b) arithmetic: intermediate products need no unit-determinant check.
  struct Raw {
    cplx a, b;
  };
  auto mul = [](const Raw& x, const Raw& y) {
    return Raw{x.a * y.a + x.b * std::conj(y.b), x.a * y.b + x.b * std::conj(y.a)};
  };
  Raw r1{g1.a, g1.b}, r2{g2.a, g2.b};
  auto match = [&](const Raw& u) {
    Raw lhs = mul(u, r1), rhs = mul(r2, u);
    double scale = 1.0 + std::abs(lhs.a) + std::abs(lhs.b);
    return (std::abs(lhs.a - rhs.a) + std::abs(lhs.b - rhs.b) < 1e-8 * scale) ||
           (std::abs(lhs.a + rhs.a) + std::abs(lhs.b + rhs.b) < 1e-8 * scale);
  };
  int ng = (int)p.gens.size();
  std::vector<Raw> gens(ng);
  for (int lab = 0; lab < ng; ++lab) gens[lab] = Raw{p.gen(lab).a, p.gen(lab).b};
  // DFS over reduced words u
  std::vector<std::tuple<Raw, int, int>> stack;  // (u, last label, length)
  stack.push_back({Raw{1.0, 0.0}, -1, 0});
  while (!stack.empty()) {
    auto [u, last, l] = stack.back();
    stack.pop_back();
    if (match(u)) return true;
    if (l == max_len) continue;
    for (int lab = 0; lab < ng; ++lab) {
      if (last >= 0 && lab == p.inverse_label[last]) continue;
      stack.push_back({mul(u, gens[lab]), lab, l + 1});
    }
  }
  return false;
}

std::vector<PrimitiveClass> primitive_classes(const MarkovCoding& c, const LinearRep* rep,
                                              int n_max) {
  std::vector<PrimitiveClass> out;
  for (int n = 1; n <= n_max; ++n) {
    enumerate_cylinders(c, rep, n, true, [&](const Cylinder& cyl) {
      if (cyl.primitive_period != n) return;
      // keep only the lexicographically minimal admissible rotation
      for (int s = 1; s < n; ++s) {
        std::vector<int> rot(n);
        for (int t = 0; t < n; ++t) rot[t] = cyl.word[(t + s) % n];
        if (rot < cyl.word) return;
      }
      PrimitiveClass pc;
      pc.cyl = cyl;
      // flag orbits anchored at partition endpoints (candidate overcounts)
      double x = cyl.x_minus;
      if (std::isfinite(x)) {
        for (int s = 0; s < n; ++s) {
          for (double q : c.pts)
            if (angle_dist(x, q) < 1e-7) pc.endpoint_anchored = true;
          x = c.T_apply(x);
        }
      }
      out.push_back(std::move(pc));
    });
  }
  // duplicate detection: conjugate group elements necessarily share geodesic
  // length and abelianized exponent vector, so bucket on both before running
  // the expensive word-conjugacy search
  auto abel_key = [&](const std::vector<int>& word) {
    long long key = 0;
    int ng = (int)c.preset->gens.size();
    std::vector<int> e(ng, 0);
    for (int w : word) ++e[c.branch_of[w]];
    for (int g = 0; g < ng / 2; ++g)
      key = key * 4096 + (e[g] - e[c.preset->inverse_label[g]] + 2048);
    return key;
  };
  std::map<std::pair<long long, long long>, std::vector<int>> by_len;
  for (size_t i = 0; i < out.size(); ++i)
    by_len[{llround(out[i].cyl.ell * 1e8), abel_key(out[i].cyl.word)}].push_back((int)i);
  int group_id = 0;
  for (auto& [len_key, idxs] : by_len) {
    (void)len_key;
    if (idxs.size() < 2) continue;
    std::vector<int> rep_of(idxs.size(), -1);
    for (size_t a = 0; a < idxs.size(); ++a) {
      if (rep_of[a] >= 0) continue;
      rep_of[a] = (int)a;
      for (size_t b = a + 1; b < idxs.size(); ++b) {
        if (rep_of[b] >= 0) continue;
        if (conjugate_in_group(*c.preset, out[idxs[a]].cyl.g, out[idxs[b]].cyl.g, 3))
          rep_of[b] = (int)a;
      }
    }
    for (size_t a = 0; a < idxs.size(); ++a) {
      std::vector<int> members;
      for (size_t b = 0; b < idxs.size(); ++b)
        if (rep_of[b] == (int)a) members.push_back(idxs[b]);
      if (members.size() > 1) {
        for (size_t t = 0; t < members.size(); ++t) {
          out[members[t]].multiplicity = (int)members.size();
          out[members[t]].dup_group = group_id;
          out[members[t]].duplicate = t > 0;
        }
        ++group_id;
      }
    }
  }
  return out;
}

SeparationReport separation_check(const MarkovCoding& c, int n_max) {
  if (n_max > 8) throw DomainError("separation_check: n <= 8");
  SeparationReport rep;
  rep.n_max = n_max;
  for (int n = 1; n <= n_max; ++n) {
    // group branch values by terminal arc; min gap via sorting on the circle
    std::vector<std::vector<double>> vals(c.k);
    enumerate_cylinders(c, nullptr, n, false, [&](const Cylinder& cyl) {
      int term = cyl.word.back();
      double x = c.arc_mid(term);
      vals[term].push_back(norm_angle(std::arg(cyl.g.apply(std::polar(1.0, x)))));
    });
    double mn = 1e18;
    for (auto& v : vals) {
      if (v.size() < 2) continue;
      std::sort(v.begin(), v.end());
      for (size_t t = 0; t + 1 < v.size(); ++t)
        mn = std::min(mn, std::abs(std::polar(1.0, v[t + 1]) - std::polar(1.0, v[t])));
      mn = std::min(mn, std::abs(std::polar(1.0, v.front()) - std::polar(1.0, v.back())));
    }
    rep.min_by_n.push_back({n, mn});
  }
  // least-squares fit log(min) = log C1 + n log theta2 over n >= 2
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (auto [n, mn] : rep.min_by_n) {
    if (n < 2 || !(mn > 0) || mn > 1e17) continue;
    double X = n, Y = std::log(mn);
    sx += X; sy += Y; sxx += X * X; sxy += X * Y;
    ++cnt;
  }
  if (cnt >= 2) {
    double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    double inter = (sy - slope * sx) / cnt;
    rep.theta2_hat = std::exp(slope);
    rep.c1_hat = std::exp(inter);
  }
  return rep;
}

DiameterReport cylinder_diameters(const MarkovCoding& c, int n_max) {
  DiameterReport rep;
  rep.n = n_max;
  for (int n = 1; n <= n_max; ++n) {
    double mn = 1e18, mx = 0.0;
    KahanSum sum;
    enumerate_cylinders(c, nullptr, n, false, [&](const Cylinder& cyl) {
      // cylinder of word a = v_{a1}...v_{a_{n-1}} (I_{a_n}); arc-length diameter
      Moebius g = Moebius::identity();
      for (int t = 0; t + 1 < (int)cyl.word.size(); ++t)
        g = compose(g, c.inverse_branch(cyl.word[t]));
      int last = cyl.word.back();
      double ta = norm_angle(std::arg(g.apply(std::polar(1.0, c.arc_lo(last)))));
      double tb = norm_angle(std::arg(g.apply(std::polar(1.0, c.arc_hi(last)))));
      double d = arc_len(ta, tb);
      mn = std::min(mn, d);
      mx = std::max(mx, d);
      sum.add(d);
    });
    rep.min_by_n.push_back({n, mn});
    if (n == n_max) {
      rep.min_diam = mn;
      rep.max_diam = mx;
      rep.sum_diam = sum.value();
    }
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (auto [n, mn] : rep.min_by_n) {
    if (n < 2) continue;
    double X = n, Y = std::log(mn);
    sx += X; sy += Y; sxx += X * X; sxy += X * Y;
    ++cnt;
  }
  if (cnt >= 2) {
    double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    rep.theta0_hat = std::exp(slope);
  }
  return rep;
}

std::vector<CharacterRow> character_table(const GroupPreset& p, const LinearRep& rep,
                                          const MarkovCoding& coding, int n_max) {
  auto classes = primitive_classes(coding, &rep, n_max);
  std::vector<CharacterRow> rows;
  for (const auto& pc : classes) {
    CharacterRow row;
    for (int arc : pc.cyl.word)
      row.word.push_back(p.inverse_label[coding.branch_of[arc]]);
    row.ell = pc.cyl.ell;
    row.ell_rho = pc.cyl.ell_rho;
    row.trace = rep.evaluate(row.word).trace();
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---- binary cylinder cache ----

std::string cache_dir() {
  const char* env = std::getenv("HYPERZETA_CACHE_DIR");
  std::string dir = env ? env : "hz_cache";
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<Cylinder> closed_cylinders_cached(const MarkovCoding& coding, int n) {
  char name[128];
  std::snprintf(name, sizeof name, "%s/closed_%016llx_n%d.bin", cache_dir().c_str(),
                (unsigned long long)coding.hash(), n);
  const char magic[8] = {'H', 'Z', 'C', 'Y', 'L', '1', 0, 0};
  std::vector<Cylinder> out;
  if (FILE* f = std::fopen(name, "rb")) {
    char m[8];
    std::uint64_t h = 0, count = 0;
    std::int32_t fn = 0;
    bool ok = std::fread(m, 1, 8, f) == 8 && !std::memcmp(m, magic, 8) &&
              std::fread(&h, 8, 1, f) == 1 && h == coding.hash() &&
              std::fread(&fn, 4, 1, f) == 1 && fn == n && std::fread(&count, 8, 1, f) == 1;
    if (ok) {
      out.reserve(count);
      for (std::uint64_t r = 0; r < count && ok; ++r) {
        Cylinder cyl;
        cyl.word.resize(n);
        std::vector<std::uint8_t> w(n);
        double d[6];
        std::int32_t per;
        ok = std::fread(w.data(), 1, n, f) == (size_t)n && std::fread(d, 8, 6, f) == 6 &&
             std::fread(&per, 4, 1, f) == 1;
        if (ok) {
          for (int t = 0; t < n; ++t) cyl.word[t] = w[t];
          cyl.g = Moebius(cplx(d[0], d[1]), cplx(d[2], d[3]));
          cyl.x_minus = d[4];
          cyl.ell = d[5];
          cyl.deriv_at_fixed = std::exp(-d[5]);
          cyl.ell_rho = d[5];
          cyl.primitive_period = per;
          out.push_back(std::move(cyl));
        }
      }
      if (ok) {
        std::fclose(f);
        return out;
      }
      out.clear();
    }
    std::fclose(f);
  }
  enumerate_cylinders(coding, nullptr, n, true,
                      [&](const Cylinder& cyl) { out.push_back(cyl); });
  if (FILE* f = std::fopen(name, "wb")) {
    std::uint64_t h = coding.hash(), count = out.size();
    std::int32_t fn = n;
    std::fwrite(magic, 1, 8, f);
    std::fwrite(&h, 8, 1, f);
    std::fwrite(&fn, 4, 1, f);
    std::fwrite(&count, 8, 1, f);
    for (const auto& cyl : out) {
      std::vector<std::uint8_t> w(n);
      for (int t = 0; t < n; ++t) w[t] = (std::uint8_t)cyl.word[t];
      double d[6] = {cyl.g.a.real(), cyl.g.a.imag(), cyl.g.b.real(),
                     cyl.g.b.imag(), cyl.x_minus, cyl.ell};
      std::int32_t per = cyl.primitive_period;
      std::fwrite(w.data(), 1, n, f);
      std::fwrite(d, 8, 6, f);
      std::fwrite(&per, 4, 1, f);
    }
    std::fclose(f);
  }
  return out;
}

}  // namespace hz
