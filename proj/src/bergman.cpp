#include "hz/bergman.hpp"

#include <algorithm>

namespace hz {

// Gauss-Legendre rule on [-1,1] by Newton iteration on P_n
static void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::fabs(dt) < 1e-15) break;
    }
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

static PlanarDomain disc_base(cplx center, double radius, int nr, int ntheta) {
  if (!(radius > 0.0)) throw DomainError("make_disc: radius must be positive");
  PlanarDomain d;
  d.kind = PlanarDomain::Kind::disc;
  d.center = center;
  d.radius = radius;
  d.area = M_PI * radius * radius;
  std::vector<double> gx, gw;
  gauss_legendre(nr, gx, gw);
  d.qnode.reserve((size_t)nr * ntheta);
  d.qweight.reserve((size_t)nr * ntheta);
  for (int i = 0; i < nr; ++i) {
    double r = 0.5 * (gx[i] + 1.0) * radius;
    double wr = 0.5 * radius * gw[i] * r;  // jacobian r dr
    for (int m = 0; m < ntheta; ++m) {
      double th = TWO_PI * m / ntheta;
      d.qnode.push_back(center + std::polar(r, th));
      d.qweight.push_back(wr * TWO_PI / ntheta);
    }
  }
  return d;
}

PlanarDomain make_disc(cplx center, double radius, int nr, int ntheta) {
  return disc_base(center, radius, nr, ntheta);
}

PlanarDomain make_moebius_disc(cplx a, cplx b, cplx c, cplx d, int nr, int ntheta) {
  cplx det = a * d - b * c;
  if (std::abs(det) < 1e-14) throw DomainError("make_moebius_disc: singular map");
  if (std::abs(d) <= std::abs(c) + 1e-12)
    throw DomainError("make_moebius_disc: pole of the map meets the closed disc");
  PlanarDomain dom = disc_base(cplx(0, 0), 1.0, nr, ntheta);
  dom.kind = PlanarDomain::Kind::moebius_image_of_disc;
  dom.ma = a;
  dom.mb = b;
  dom.mc = c;
  dom.md = d;
  KahanSum area;
  for (size_t q = 0; q < dom.qnode.size(); ++q) {
    cplx z = dom.qnode[q];
    cplx den = c * z + d;
    cplx dm = det / (den * den);
    dom.qnode[q] = (a * z + b) / den;
    dom.qweight[q] *= std::norm(dm);
    area.add(dom.qweight[q]);
  }
  dom.area = area.value();
  return dom;
}

PlanarDomain make_tube(double theta_lo, double theta_hi, double h, int gl_order) {
  if (!(theta_hi > theta_lo)) throw DomainError("make_tube: need theta_hi > theta_lo");
  if (!(h > 0.0 && h < 1.0)) throw DomainError("make_tube: need 0 < h < 1");
  PlanarDomain d;
  d.kind = PlanarDomain::Kind::tube;
  d.theta_lo = theta_lo;
  d.theta_hi = theta_hi;
  d.h = h;
  double L = theta_hi - theta_lo;
  d.area = 2.0 * h * L;  // int r dr dtheta over [1-h,1+h] x [lo,hi]
  int panels = std::max(3, (int)std::ceil(L / h));
  std::vector<double> gx, gw;
  gauss_legendre(gl_order, gx, gw);
  for (int p = 0; p < panels; ++p) {
    double t0 = theta_lo + L * p / panels, t1 = theta_lo + L * (p + 1) / panels;
    for (int i = 0; i < gl_order; ++i) {
      double th = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * gx[i];
      double wth = 0.5 * (t1 - t0) * gw[i];
      for (int j = 0; j < gl_order; ++j) {
        double r = 1.0 + h * gx[j];
        double wr = h * gw[j] * r;
        d.qnode.push_back(std::polar(r, th));
        d.qweight.push_back(wth * wr);
      }
    }
  }
  return d;
}

PlanarDomain make_polygon(std::vector<cplx> vertices, int refine) {
  int n = (int)vertices.size();
  if (n < 3) throw DomainError("make_polygon: need at least 3 vertices");
  PlanarDomain d;
  d.kind = PlanarDomain::Kind::polygon;
  d.vertices = vertices;
  double a2 = 0.0;
  cplx cen(0, 0);
  for (int i = 0; i < n; ++i) {
    cplx u = vertices[i], v = vertices[(i + 1) % n];
    double cr = u.real() * v.imag() - v.real() * u.imag();
    a2 += cr;
    cen += (u + v) * cr;
  }
  d.area = std::fabs(0.5 * a2);
  if (d.area < 1e-14) throw DomainError("make_polygon: degenerate polygon");
  cen /= 3.0 * a2;
  d.center = cen;
  std::vector<double> gx, gw;
  gauss_legendre(refine, gx, gw);
  // Duffy map of [0,1]^2 onto each fan triangle (cen, v_i, v_{i+1})
  for (int i = 0; i < n; ++i) {
    cplx v1 = vertices[i] - cen, v2 = vertices[(i + 1) % n] - cen;
    double tri2 = v1.real() * v2.imag() - v2.real() * v1.imag();  // 2*signed area
    for (int a = 0; a < refine; ++a) {
      double u = 0.5 * (gx[a] + 1.0), wu = 0.5 * gw[a];
      for (int b = 0; b < refine; ++b) {
        double v = 0.5 * (gx[b] + 1.0), wv = 0.5 * gw[b];
        d.qnode.push_back(cen + u * (1.0 - v) * v1 + u * v * v2);
        d.qweight.push_back(std::fabs(tri2) * u * wu * wv);
      }
    }
  }
  return d;
}

std::vector<cplx> PlanarDomain::boundary(int M) const {
  if (M < 3) throw DomainError("boundary: need at least 3 samples");
  std::vector<cplx> out;
  out.reserve(M);
  switch (kind) {
    case Kind::disc:
      for (int m = 0; m < M; ++m)
        out.push_back(center + std::polar(radius, TWO_PI * m / M));
      break;
    case Kind::moebius_image_of_disc:
      for (int m = 0; m < M; ++m) {
        cplx z = std::polar(1.0, TWO_PI * m / M);
        out.push_back((ma * z + mb) / (mc * z + md));
      }
      break;
    case Kind::tube: {
      double L = theta_hi - theta_lo;
      double per = 2.0 * L + 4.0 * h;  // perimeter in parameter length
      for (int m = 0; m < M; ++m) {
        double t = per * m / M;
        if (t < L)
          out.push_back(std::polar(1.0 + h, theta_lo + t));
        else if ((t -= L) < 2.0 * h)
          out.push_back(std::polar(1.0 + h - t, theta_hi));
        else if ((t -= 2.0 * h) < L)
          out.push_back(std::polar(1.0 - h, theta_hi - t));
        else
          out.push_back(std::polar(1.0 - h + (t - L), theta_lo));
      }
      break;
    }
    case Kind::polygon: {
      int n = (int)vertices.size();
      std::vector<double> len(n + 1, 0.0);
      for (int i = 0; i < n; ++i)
        len[i + 1] = len[i] + std::abs(vertices[(i + 1) % n] - vertices[i]);
      for (int m = 0; m < M; ++m) {
        double t = len[n] * m / M;
        int i = (int)(std::upper_bound(len.begin(), len.end(), t) - len.begin()) - 1;
        i = std::min(i, n - 1);
        double s = (t - len[i]) / (len[i + 1] - len[i]);
        out.push_back(vertices[i] + s * (vertices[(i + 1) % n] - vertices[i]));
      }
      break;
    }
  }
  return out;
}

cplx disc_kernel(cplx z, cplx w) {
  if (std::abs(z) >= 1.0 || std::abs(w) >= 1.0)
    throw DomainError("disc_kernel: arguments must lie in the open unit disc");
  cplx d = 1.0 - z * std::conj(w);
  return 1.0 / (M_PI * d * d);
}

double disc_density(cplx z) { return 2.0 / (1.0 - std::norm(z)); }

double disc_distance(cplx z, cplx w) {
  double q = std::abs((z - w) / (1.0 - z * std::conj(w)));
  return std::log((1.0 + q) / (1.0 - q));
}

void KernelApprox::basis_at(cplx z, Eigen::VectorXcd& out) const {
  cplx zeta = (z - center) / scale;
  Eigen::VectorXcd mono(N_b);
  cplx p = 1.0;
  for (int a = 0; a < N_b; ++a) {
    mono(a) = p;
    p *= zeta;
  }
  out.noalias() = coef.transpose() * mono;
}

cplx KernelApprox::eval(cplx z, cplx w) const {
  Eigen::VectorXcd pz, pw;
  basis_at(z, pz);
  basis_at(w, pw);
  return pw.dot(pz);  // sum_l phi_l(z) conj(phi_l(w))
}

KernelApprox numeric_kernel(const PlanarDomain& domain, int N_b) {
  if (N_b < 1 || N_b > 80) throw DomainError("numeric_kernel: N_b must be in [1,80]");
  KernelApprox ka;
  ka.domain = &domain;
  ka.N_b = N_b;
  switch (domain.kind) {
    case PlanarDomain::Kind::disc:
      ka.center = domain.center;
      ka.scale = domain.radius;
      break;
    case PlanarDomain::Kind::tube:
      ka.center = std::polar(1.0, 0.5 * (domain.theta_lo + domain.theta_hi));
      break;
    case PlanarDomain::Kind::moebius_image_of_disc:
      ka.center = domain.mb / domain.md;  // image of 0
      break;
    case PlanarDomain::Kind::polygon:
      ka.center = domain.center;
      break;
  }
  if (domain.kind != PlanarDomain::Kind::disc) {
    double s = 0.0;
    for (cplx b : domain.boundary(256)) s = std::max(s, std::abs(b - ka.center));
    ka.scale = s;
  }
  int Q = (int)domain.qnode.size();
  Eigen::MatrixXcd A(Q, N_b);
  for (int q = 0; q < Q; ++q) {
    double sw = std::sqrt(domain.qweight[q]);
    cplx zeta = (domain.qnode[q] - ka.center) / ka.scale;
    cplx p = 1.0;
    for (int a = 0; a < N_b; ++a) {
      A(q, a) = sw * p;
      p *= zeta;
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(A);
  Eigen::MatrixXcd R = qr.matrixQR().topRows(N_b).triangularView<Eigen::Upper>();
  double dmin = 1e300, dmax = 0.0;
  for (int a = 0; a < N_b; ++a) {
    double d = std::abs(R(a, a));
    dmin = std::min(dmin, d);
    dmax = std::max(dmax, d);
  }
  if (!(dmin > 1e-13 * dmax))
    throw IllConditionedGram("numeric_kernel: Gram matrix too ill-conditioned; reduce N_b");
  ka.coef = R.triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXcd::Identity(N_b, N_b));
  return ka;
}

double apollonian(const PlanarDomain& domain, cplx x, cplx y, int M_b) {
  // sup_{a,b} log(|a-x||b-y| / (|a-y||b-x|)) separates into two boundary sups
  auto bd = domain.boundary(M_b);
  double s1 = -1e300, s2 = -1e300;
  for (cplx a : bd) {
    double rx = std::abs(a - x), ry = std::abs(a - y);
    if (rx < 1e-14 || ry < 1e-14)
      throw DomainError("apollonian: points must be interior");
    s1 = std::max(s1, std::log(rx / ry));
    s2 = std::max(s2, std::log(ry / rx));
  }
  return s1 + s2;
}

TubeBoundReport tube_bound_check(double theta_lo, double theta_hi,
                                 const std::vector<double>& h_list, double c, double nu) {
  if (h_list.size() < 3) throw DomainError("tube_bound_check: need >= 3 values of h");
  for (size_t i = 1; i < h_list.size(); ++i)
    if (!(h_list[i] < h_list[i - 1]))
      throw DomainError("tube_bound_check: h_list must be decreasing");
  if (!(c > 0.0 && c < 1.0)) throw DomainError("tube_bound_check: need c in (0,1)");
  if (!(nu > 0.0 && nu < 1.0)) throw DomainError("tube_bound_check: need nu in (0,1)");

  TubeBoundReport rep;
  for (double h : h_list) {
    PlanarDomain dom = make_tube(theta_lo, theta_hi, h);
    KernelApprox ka;
    int nb = 80;
    for (;; nb -= 8) {
      if (nb < 8) throw IllConditionedGram("tube_bound_check: no usable basis size");
      try {
        ka = numeric_kernel(dom, nb);
        break;
      } catch (const IllConditionedGram&) {
      }
    }
    // admissible sample points: depth to the tube boundary >= c*h
    std::vector<cplx> pts;
    int nth = 72, nrr = 13;
    for (int i = 0; i < nth; ++i) {
      double th = theta_lo + (theta_hi - theta_lo) * (i + 0.5) / nth;
      for (int j = 0; j < nrr; ++j) {
        double r = 1.0 - h + 2.0 * h * (j + 0.5) / nrr;
        double depth = std::min({h - std::fabs(r - 1.0), r * (th - theta_lo),
                                 r * (theta_hi - th)});
        if (depth >= c * h) pts.push_back(std::polar(r, th));
      }
    }
    Eigen::MatrixXcd P((int)pts.size(), ka.N_b);
    Eigen::VectorXcd row;
    for (size_t i = 0; i < pts.size(); ++i) {
      ka.basis_at(pts[i], row);
      P.row((int)i) = row;
    }
    double dsup = 0.0;
    Eigen::VectorXd diagv = P.rowwise().squaredNorm();
    for (size_t i = 0; i < pts.size(); ++i) dsup = std::max(dsup, h * h * diagv((int)i));
    double sep = c * std::pow(h, nu), osup = 0.0;
    for (size_t i = 0; i < pts.size(); ++i)
      for (size_t j = i + 1; j < pts.size(); ++j) {
        if (std::abs(pts[i] - pts[j]) < sep) continue;
        osup = std::max(osup, std::abs(P.row((int)j).dot(P.row((int)i))));
      }
    rep.h.push_back(h);
    rep.diag_sup.push_back(dsup);
    rep.offdiag_sup.push_back(osup);
    rep.basis_used.push_back(ka.N_b);
  }
  double mn = *std::min_element(rep.diag_sup.begin(), rep.diag_sup.end());
  double mx = *std::max_element(rep.diag_sup.begin(), rep.diag_sup.end());
  rep.diag_ratio = mx / mn;
  // least-squares slope of log offdiag_sup against log h
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = (int)rep.h.size();
  for (int i = 0; i < n; ++i) {
    double X = std::log(rep.h[i]), Y = std::log(rep.offdiag_sup[i]);
    sx += X;
    sy += Y;
    sxx += X * X;
    sxy += X * Y;
  }
  rep.offdiag_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return rep;
}

}  // namespace hz
