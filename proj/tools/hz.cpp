// hz: command-line surface over the hyperzeta library
#include <chrono>
#include <filesystem>
#include <functional>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hz/bergman.hpp"
#include "hz/coding.hpp"
#include "hz/groups.hpp"
#include "hz/spectral.hpp"
#include "hz/thermo.hpp"
#include "hz/zeta.hpp"

using namespace hz;
using nlohmann::json;

namespace {

struct RunConfig {
  std::string preset = "octagon";
  std::string rep = "trivial";
  int n_max = 8;
  int N = 20;
  double h = 0.05;
  double L = 14.0;
  int p_max = 8;
  int grid = 3;
  double tol = 1e-8;
  std::string out;
  std::string cache;
  int jobs = 1;

  void validate() const {
    if (!(h > 0.0)) throw ConfigError("config: h must be positive");
    if (!(tol > 0.0)) throw ConfigError("config: tol must be positive");
    if (N < 2 || N > 64) throw ConfigError("config: N must be in [2,64]");
    if (n_max < 1 || n_max > 12) throw ConfigError("config: n_max must be in [1,12]");
    if (p_max < 1 || p_max > 12) throw ConfigError("config: p_max must be in [1,12]");
    if (jobs < 1) throw ConfigError("config: jobs must be positive");
    if (!(L > 0.0)) throw ConfigError("config: L must be positive");
    if (grid < 1) throw ConfigError("config: grid must be positive");
  }

  json dump() const {
    return json{{"preset", preset}, {"rep", rep},     {"n_max", n_max}, {"N", N},
                {"h", h},           {"L", L},         {"p_max", p_max}, {"grid", grid},
                {"tol", tol},       {"out", out},     {"cache", cache}, {"jobs", jobs}};
  }

  void load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config: parse error: ") + e.what());
    }
    static const char* keys[] = {"preset", "rep", "n_max", "N",     "h",    "L",
                                 "p_max",  "grid", "tol",  "out",   "cache", "jobs"};
    for (auto it = j.begin(); it != j.end(); ++it) {
      bool known = false;
      for (const char* k : keys) known = known || it.key() == k;
      if (!known) throw ConfigError("config: unknown key '" + it.key() + "'");
    }
    preset = j.value("preset", preset);
    rep = j.value("rep", rep);
    n_max = j.value("n_max", n_max);
    N = j.value("N", N);
    h = j.value("h", h);
    L = j.value("L", L);
    p_max = j.value("p_max", p_max);
    grid = j.value("grid", grid);
    tol = j.value("tol", tol);
    out = j.value("out", out);
    cache = j.value("cache", cache);
    jobs = j.value("jobs", jobs);
  }
};

struct Session {
  RunConfig cfg;
  GroupPreset preset;
  std::unique_ptr<LinearRep> rep_store;  // null for the trivial character
  MarkovCoding coding;
  std::vector<std::pair<std::string, std::uint64_t>> emitted;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  const LinearRep* rep() const { return rep_store.get(); }

  void open() {
    if (!cfg.cache.empty()) setenv("HYPERZETA_CACHE_DIR", cfg.cache.c_str(), 1);
    if (cfg.rep.rfind("file:", 0) == 0) {
      auto [p, r] = load_group_file(cfg.rep.substr(5));
      preset = p;
      rep_store = std::make_unique<LinearRep>(r);
    } else {
      if (cfg.preset != "octagon") throw ConfigError("config: unknown preset " + cfg.preset);
      preset = octagon_preset();
      if (cfg.rep == "trivial") {
      } else if (cfg.rep == "ad" || cfg.rep == "adjoint") {
        rep_store = std::make_unique<LinearRep>(adjoint_rep(preset));
      } else if (cfg.rep == "spin") {
        rep_store = std::make_unique<LinearRep>(spin_lift(preset, spin_structures(preset)[0]));
      } else if (cfg.rep.rfind("sym", 0) == 0) {
        int n = std::atoi(cfg.rep.c_str() + 3);
        if (n < 1 || n > 6) throw ConfigError("config: sym power must be in [1,6]");
        auto signs = spin_structures(preset)[0];
        rep_store = std::make_unique<LinearRep>(sym_power_rep(preset, n, &signs));
      } else if (cfg.rep.rfind("deform:", 0) == 0) {
        double ar, ai, br, bi;
        if (sscanf(cfg.rep.c_str() + 7, "%lf,%lf,%lf,%lf", &ar, &ai, &br, &bi) != 4)
          throw ConfigError("config: deform spec must be deform:ar,ai,br,bi");
        rep_store = std::make_unique<LinearRep>(
            conjugate_deformation(preset, Moebius(cplx(ar, ai), cplx(br, bi))));
      } else {
        throw ConfigError("config: unknown rep '" + cfg.rep + "'");
      }
    }
    coding = build_bowen_series(preset);
  }

  void write_file(const std::string& name, const std::string& body) {
    std::filesystem::create_directories(cfg.out);
    std::string path = cfg.out + "/" + name;
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write " + path);
    f << body;
    emitted.emplace_back(name, fnv1a(body));
  }

  int finish(const std::string& name, json result) {
    result["provenance"]["preset"] = cfg.preset;
    result["provenance"]["rep"] = cfg.rep;
    result["provenance"]["coding_hash"] = coding.hash();
    std::string body = result.dump(2) + "\n";
    printf("%s", body.c_str());
    if (!cfg.out.empty()) {
      write_file(name + ".json", body);
      json man;
      man["config"] = cfg.dump();
      man["config_hash"] = fnv1a(cfg.dump().dump());
      man["coding_hash"] = coding.hash();
      man["timing_ms"] = (double)std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
      json files = json::array();
      for (const auto& [n, h] : emitted) files.push_back({{"file", n}, {"checksum", h}});
      man["files"] = files;
      std::ofstream mf(cfg.out + "/manifest.json");
      mf << man.dump(2) << "\n";
    }
    return 0;
  }
};

json cx(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json zeta_value_json(const ZetaValue& v) {
  json j;
  j["value"] = cx(v.value);
  j["error_bound"] = v.error_bound;
  j["provenance"] = {{"method", v.method == ZetaMethod::euler    ? "euler"
                                : v.method == ZetaMethod::orbit_det ? "orbit_det"
                                                                    : "matrix_det"},
                     {"s", cx(v.s)},
                     {"L_max", v.L_max},
                     {"k_max", v.k_max},
                     {"p_max", v.p_max},
                     {"n_cap", v.n_cap},
                     {"N", v.N},
                     {"h", v.h},
                     {"converged", v.converged}};
  return j;
}

// Z(s, chi) from a class set, chi = sign of the dominant eigenvalue of rho(gamma)
cplx euler_signed(cplx s, const ZetaClassSet& cs, double L) {
  cplx acc = 1.0;
  for (const auto& cd : cs.classes) {
    if (cd.ell > L) continue;
    double chi = 1.0;
    double best = 0.0;
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

std::string zeros_csv(const ZeroList& zl) {
  std::ostringstream os;
  os << "s_re,s_im,lambda_re,lambda_im,residual,flags\n";
  for (const auto& z : zl.zeros) {
    std::string flags;
    if (z.winding_confirmed) flags += "winding_confirmed";
    if (z.ambiguous) flags += (flags.empty() ? "" : "|") + std::string("ambiguous");
    if (z.multiplicity > 1)
      flags += (flags.empty() ? "" : "|") + std::string("mult=") +
               std::to_string(z.multiplicity);
    char buf[256];
    snprintf(buf, sizeof buf, "%.12f,%.12f,%.12f,%.12f,%.3e,%s\n", z.s.real(), z.s.imag(),
             z.lambda.real(), z.lambda.imag(), z.residual, flags.c_str());
    os << buf;
  }
  return os.str();
}

std::string parabola_plotdata(const std::vector<double>& sigmas, const ZeroList& zl,
                              double y_max) {
  std::ostringstream os;
  char buf[128];
  for (double sg : sigmas) {
    snprintf(buf, sizeof buf, "PARABOLA sigma=%.6f\n", sg);
    os << buf;
    if (sg == 0.5) {
      snprintf(buf, sizeof buf, "%.6f,%.6f\n%.6f,%.6f\n", 0.25, 0.0,
               0.25 + y_max * y_max, 0.0);
      os << buf;
      continue;
    }
    double w = 1.0 - 2.0 * sg;
    for (double y = -y_max; y <= y_max + 1e-12; y += 0.05) {
      snprintf(buf, sizeof buf, "%.6f,%.6f\n", sg * (1 - sg) + y * y / (w * w), y);
      os << buf;
    }
  }
  os << "SECTION zeros\n";
  for (const auto& z : zl.zeros) {
    snprintf(buf, sizeof buf, "%.12f,%.12f\n", z.lambda.real(), z.lambda.imag());
    os << buf;
  }
  return os.str();
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hz: twisted Selberg zeta functions on the Bolza surface"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help and exit");

  Session S;
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file");
  // flag overrides (applied after --config)
  app.add_option("--preset", S.cfg.preset, "group preset (octagon)");
  app.add_option("--rep", S.cfg.rep,
                 "trivial|ad|spin|symN|deform:ar,ai,br,bi|file:path");
  app.add_option("--n-max", S.cfg.n_max, "orbit depth");
  app.add_option("-N,--order", S.cfg.N, "collocation order");
  app.add_option("--h", S.cfg.h, "tube half-width");
  app.add_option("--L", S.cfg.L, "length cutoff");
  app.add_option("--p-max", S.cfg.p_max, "trace depth for orbit determinants");
  app.add_option("--grid", S.cfg.grid, "scan grid subdivisions");
  app.add_option("--tol", S.cfg.tol, "tolerance");
  app.add_option("--out", S.cfg.out, "output directory");
  app.add_option("--cache", S.cfg.cache, "cache directory (HYPERZETA_CACHE_DIR)");
  app.add_option("--jobs", S.cfg.jobs, "worker pool width");

  // coding
  auto* c_coding = app.add_subcommand("coding", "Bowen-Series coding");
  auto* c_validate = c_coding->add_subcommand("validate", "run coding checks");

  // thermo
  auto* c_thermo = app.add_subcommand("thermo", "thermodynamic formalism");
  double w_psi = 0.0, w_tau = -1.0;
  auto* c_pressure = c_thermo->add_subcommand("pressure", "topological pressure");
  c_pressure->add_option("--c-psi", w_psi, "psi coefficient");
  c_pressure->add_option("--c-tau", w_tau, "tau coefficient");
  auto* c_delta = c_thermo->add_subcommand("delta", "critical exponent");
  bool doubled = false;
  double beta_arg = -1.0;
  c_delta->add_flag("--doubled", doubled, "solve P(2 beta psi - 2 sigma tau) = 0");
  c_delta->add_option("--beta", beta_arg, "beta (default: rep growth exponent)");
  auto* c_manhattan = c_thermo->add_subcommand("manhattan", "Manhattan curve");
  int mh_points = 11;
  c_manhattan->add_option("--points", mh_points, "grid size");
  auto* c_stretch = c_thermo->add_subcommand("stretch", "geodesic stretch");

  // zeta
  auto* c_zeta = app.add_subcommand("zeta", "twisted Selberg zeta");
  std::string s_arg = "5,0", method = "euler", kind = "ad";
  double heat_t = 0.05;
  bool no_deform = false;
  auto* c_eval = c_zeta->add_subcommand("eval", "evaluate Z(s)");
  c_eval->add_option("--s", s_arg, "s as re,im");
  c_eval->add_option("--method", method, "euler|orbit|matrix");
  auto* c_ident = c_zeta->add_subcommand("identity", "factorization residual");
  c_ident->add_option("--kind", kind, "ad|spin|sym");
  c_ident->add_option("--s", s_arg, "s as re,im");
  auto* c_heat = c_zeta->add_subcommand("heat", "geometric heat trace");
  c_heat->add_option("--t", heat_t, "time");
  auto* c_funceq = c_zeta->add_subcommand("funceq", "functional equation residual");
  c_funceq->add_option("--s", s_arg, "s as re,im");
  c_funceq->add_flag("--no-deform", no_deform, "forbid contour deformation");

  // spectral
  auto* c_spec = app.add_subcommand("spectral", "determinant zeros and spectra");
  std::string rect_arg = "0.3,1.3,-0.3,0.3", plot_sigmas, plot_path;
  double weyl_T = 5.5, win_sigma = 0.51, win_r = 3.0;
  auto* c_scan = c_spec->add_subcommand("scan", "argument-principle zero scan");
  c_scan->add_option("--rect", rect_arg, "sigma_min,sigma_max,t_min,t_max");
  c_scan->add_option("--plot-sigmas", plot_sigmas, "emit parabola plot data");
  c_scan->add_option("--plot", plot_path, "plot data file name");
  auto* c_weyl = c_spec->add_subcommand("weyl", "Weyl-law comparison");
  c_weyl->add_option("--T", weyl_T, "spectral window");
  auto* c_win = c_spec->add_subcommand("windows", "M_sigma(r) window counts");
  c_win->add_option("--sigma", win_sigma, "parabola parameter");
  c_win->add_option("--r", win_r, "window start");
  c_win->add_option("--rect", rect_arg, "scan rectangle");

  // bergman
  auto* c_berg = app.add_subcommand("bergman", "Bergman kernel checks");
  auto* c_check = c_berg->add_subcommand("check", "domain kernel report");
  std::string domain = "tube", h_list_arg = "0.1,0.05,0.025", interval_arg = "0,0.3";
  double nu = 0.5, c_par = 0.5;
  c_check->add_option("--domain", domain, "tube|disc");
  c_check->add_option("--h-list", h_list_arg, "decreasing h values");
  c_check->add_option("--nu", nu, "off-diagonal separation exponent");
  c_check->add_option("--interval", interval_arg, "tube spine theta_lo,theta_hi");
  c_check->add_option("--c", c_par, "admissible-depth fraction");

  auto* c_report = app.add_subcommand("report", "bundled runs");
  auto* c_all = c_report->add_subcommand("all", "run the standard bundle");

  // let global flags appear after the subcommand
  std::function<void(CLI::App*)> allow_global = [&](CLI::App* a) {
    a->fallthrough();
    for (auto* sub : a->get_subcommands({})) allow_global(sub);
  };
  allow_global(&app);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      RunConfig file_cfg;
      file_cfg.load(config_path);
      // file values apply only where no command-line flag was passed
      auto passed = [&](const std::string& n) {
        auto* o = app.get_option_no_throw(n);
        return o && o->count() > 0;
      };
      if (!passed("--preset")) S.cfg.preset = file_cfg.preset;
      if (!passed("--rep")) S.cfg.rep = file_cfg.rep;
      if (!passed("--n-max")) S.cfg.n_max = file_cfg.n_max;
      if (!passed("--order")) S.cfg.N = file_cfg.N;
      if (!passed("--h")) S.cfg.h = file_cfg.h;
      if (!passed("--L")) S.cfg.L = file_cfg.L;
      if (!passed("--p-max")) S.cfg.p_max = file_cfg.p_max;
      if (!passed("--grid")) S.cfg.grid = file_cfg.grid;
      if (!passed("--tol")) S.cfg.tol = file_cfg.tol;
      if (!passed("--out")) S.cfg.out = file_cfg.out;
      if (!passed("--cache")) S.cfg.cache = file_cfg.cache;
      if (!passed("--jobs")) S.cfg.jobs = file_cfg.jobs;
    }
    S.cfg.validate();
    S.open();

    auto parse_s = [&]() {
      auto v = parse_list(s_arg);
      if (v.size() != 2) throw ConfigError("config: --s must be re,im");
      return cplx(v[0], v[1]);
    };

    if (c_validate->parsed()) {
      const CodingReport& r = S.coding.report;
      json j;
      j["value"] = {{"k", r.k},
                    {"markov_residual_max", r.markov_residual_max},
                    {"expansion_two_step", S.coding.D},
                    {"mixing_exponent", S.coding.p0},
                    {"n0", S.coding.n0},
                    {"h_max", S.coding.h_max},
                    {"tube_inclusion_margin", tube_inclusion_margin(S.coding, S.cfg.h)},
                    {"ok", r.ok}};
      j["error_bound"] = r.markov_residual_max;
      j["provenance"]["detail"] = r.detail;
      return S.finish("coding_validate", j);
    }
    if (c_pressure->parsed()) {
      PressureEstimate pe =
          pressure(S.coding, S.rep(), {w_psi, w_tau, S.rep()}, S.cfg.n_max);
      json j;
      j["value"] = pe.value;
      j["error_bound"] = pe.error_bound;
      j["provenance"] = {{"c_psi", w_psi}, {"c_tau", w_tau}, {"n_used", pe.n_used}};
      json lv = json::array();
      for (auto& [n, v] : pe.per_level) lv.push_back({{"n", n}, {"log_S_n_over_n", v}});
      j["provenance"]["per_level"] = lv;
      return S.finish("pressure", j);
    }
    if (c_delta->parsed()) {
      double beta = beta_arg >= 0 ? beta_arg : (S.rep() ? S.rep()->beta : 0.0);
      double d = critical_exponent(S.coding, S.rep(), beta, doubled, S.cfg.n_max);
      json j;
      j["value"] = d;
      j["error_bound"] = 0.01;
      j["provenance"] = {{"beta", beta}, {"doubled", doubled}, {"n_max", S.cfg.n_max}};
      return S.finish("delta", j);
    }
    if (c_manhattan->parsed()) {
      std::vector<double> grid;
      for (int i = 0; i < mh_points; ++i) grid.push_back((double)i / (mh_points - 1));
      auto curve = manhattan_curve(S.coding, S.rep(), grid, S.cfg.n_max);
      json pts = json::array();
      double worst = 0.0;
      for (auto& [a, b] : curve) {
        pts.push_back({{"a", a}, {"b", b}});
        worst = std::max(worst, std::fabs(a + b - 1.0));
      }
      json j;
      j["value"] = {{"points", pts}, {"max_line_deviation", worst}};
      j["error_bound"] = 0.01;
      j["provenance"] = {{"n_max", S.cfg.n_max}};
      return S.finish("manhattan", j);
    }
    if (c_stretch->parsed()) {
      StretchResult st = geodesic_stretch(S.coding, S.rep(), S.cfg.n_max);
      json j;
      j["value"] = {{"i_minus", st.i_minus}, {"i_plus", st.i_plus}};
      j["error_bound"] = 0.0;
      j["provenance"] = {{"n_max", st.n_max}};
      return S.finish("stretch", j);
    }
    if (c_eval->parsed()) {
      cplx s = parse_s();
      ZetaValue v;
      if (method == "euler")
        v = euler_product(s, S.rep(), S.coding, S.cfg.L);
      else if (method == "orbit")
        v = fredholm_det_orbit(s, S.rep(), S.coding, S.cfg.p_max);
      else if (method == "matrix")
        v = fredholm_det_matrix(s, S.rep(), S.coding, S.cfg.h, S.cfg.N);
      else
        throw ConfigError("config: unknown method " + method);
      return S.finish("zeta_eval", zeta_value_json(v));
    }
    if (c_ident->parsed()) {
      cplx s = parse_s();
      double resid;
      json prov;
      if (kind == "ad") {
        LinearRep ad = adjoint_rep(S.preset);
        cplx lhs = euler_product(s, &ad, S.coding, S.cfg.L).value;
        cplx rhs = euler_product(s - 1.0, nullptr, S.coding, S.cfg.L).value *
                   euler_product(s, nullptr, S.coding, S.cfg.L).value *
                   euler_product(s + 1.0, nullptr, S.coding, S.cfg.L).value;
        resid = std::abs(lhs - rhs) / std::abs(lhs);
        prov = {{"kind", "ad"}, {"factors", 3}};
      } else if (kind == "spin") {
        LinearRep sp = spin_lift(S.preset, spin_structures(S.preset)[0]);
        const ZetaClassSet& cs = zeta_classes(S.coding, &sp, 7);
        cplx lhs = euler_product(s, &sp, S.coding, S.cfg.L).value;
        cplx rhs = euler_signed(s - 0.5, cs, S.cfg.L) * euler_signed(s + 0.5, cs, S.cfg.L);
        resid = std::abs(lhs - rhs) / std::abs(lhs);
        prov = {{"kind", "spin"}, {"factors", 2}};
      } else if (kind == "sym") {
        auto signs = spin_structures(S.preset)[0];
        LinearRep s3 = sym_power_rep(S.preset, 3, &signs);
        const ZetaClassSet& cs = zeta_classes(S.coding, &s3, 7);
        cplx lhs = euler_product(s, &s3, S.coding, S.cfg.L).value;
        cplx rhs = 1.0;
        for (int jj = 0; jj < 4; ++jj) rhs *= euler_signed(s - 1.5 + (double)jj, cs, S.cfg.L);
        resid = std::abs(lhs - rhs) / std::abs(lhs);
        prov = {{"kind", "sym3"}, {"factors", 4}};
      } else {
        throw ConfigError("config: unknown identity kind " + kind);
      }
      json j;
      j["value"] = resid;
      j["error_bound"] = S.cfg.tol;
      prov["s"] = cx(s);
      prov["L_max"] = S.cfg.L;
      j["provenance"] = prov;
      return S.finish("zeta_identity", j);
    }
    if (c_heat->parsed()) {
      cplx g = heat_trace_geometric(heat_t, S.rep(), S.coding, S.cfg.L);
      int dim = S.rep() ? S.rep()->dim : 1;
      double lead = dim * 4.0 * M_PI / (4.0 * M_PI * heat_t);  // dim Vol/(4 pi t)
      json j;
      j["value"] = {{"geometric", cx(g)}, {"leading_term", lead},
                    {"ratio", g.real() / lead}};
      j["error_bound"] = 1e-10;
      j["provenance"] = {{"t", heat_t}, {"L_max", S.cfg.L}};
      return S.finish("zeta_heat", j);
    }
    if (c_funceq->parsed()) {
      cplx s = parse_s();
      double r = functional_equation_residual(s, S.rep(), S.coding, S.cfg.h, S.cfg.N,
                                              !no_deform);
      json j;
      j["value"] = r;
      j["error_bound"] = 1e-3;
      j["provenance"] = {{"s", cx(s)}, {"h", S.cfg.h}, {"N", S.cfg.N}};
      return S.finish("zeta_funceq", j);
    }
    auto do_scan = [&]() {
      auto v = parse_list(rect_arg);
      if (v.size() != 4) throw ConfigError("config: --rect must be 4 numbers");
      return zero_scan(S.rep(), S.coding, {v[0], v[1], v[2], v[3]}, S.cfg.h, S.cfg.N,
                       S.cfg.grid);
    };
    auto zeros_json = [&](const ZeroList& zl) {
      json zs = json::array();
      for (const auto& z : zl.zeros)
        zs.push_back({{"s", cx(z.s)},
                      {"lambda", cx(z.lambda)},
                      {"multiplicity", z.multiplicity},
                      {"winding_confirmed", z.winding_confirmed},
                      {"residual", z.residual},
                      {"ambiguous", z.ambiguous}});
      return json{{"zeros", zs},
                  {"total_winding", zl.total_winding},
                  {"rect", {zl.rect.sigma_min, zl.rect.sigma_max, zl.rect.t_min,
                            zl.rect.t_max}}};
    };
    if (c_scan->parsed()) {
      ZeroList zl = do_scan();
      json j;
      j["value"] = zeros_json(zl);
      j["error_bound"] = S.cfg.tol;
      j["provenance"] = {{"h", S.cfg.h}, {"N", S.cfg.N}, {"grid", S.cfg.grid}};
      if (!S.cfg.out.empty()) S.write_file("zeros.csv", zeros_csv(zl));
      if (!plot_sigmas.empty() && !S.cfg.out.empty())
        S.write_file(plot_path.empty() ? "parabola.csv" : plot_path,
                     parabola_plotdata(parse_list(plot_sigmas), zl,
                                       std::max(std::fabs(zl.rect.t_min),
                                                std::fabs(zl.rect.t_max)) + 1.0));
      return S.finish("spectral_scan", j);
    }
    if (c_weyl->parsed()) {
      double delta = rep_delta(S.coding, S.rep());
      double t_need = std::sqrt(std::max(weyl_T - 0.25, 0.0));
      ScanRect rect{0.42, delta + 0.08, -0.2, t_need + 0.05};
      double h = std::min(S.cfg.h, 0.995 / (1.0 + rect.t_max));
      ZeroList zl = zero_scan(S.rep(), S.coding, rect, h, S.cfg.N, S.cfg.grid);
      WeylReport w = weyl_compare(zl, S.rep(), S.coding, weyl_T);
      json j;
      j["value"] = {{"observed", w.observed}, {"predicted", w.predicted},
                    {"ratio", w.ratio}};
      j["error_bound"] = 0.3;
      j["provenance"] = {{"T", w.T},
                         {"rect", {rect.sigma_min, rect.sigma_max, rect.t_min, rect.t_max}},
                         {"h", h},
                         {"N", S.cfg.N},
                         {"total_winding", zl.total_winding}};
      if (!S.cfg.out.empty()) S.write_file("zeros.csv", zeros_csv(zl));
      return S.finish("spectral_weyl", j);
    }
    if (c_win->parsed()) {
      ZeroList zl = do_scan();
      int m = count_windows(zl, win_sigma, win_r);
      json j;
      j["value"] = m;
      j["error_bound"] = 0.0;
      j["provenance"] = {{"sigma", win_sigma},
                         {"r", win_r},
                         {"rect", {zl.rect.sigma_min, zl.rect.sigma_max, zl.rect.t_min,
                                   zl.rect.t_max}},
                         {"total_winding", zl.total_winding}};
      return S.finish("spectral_windows", j);
    }
    if (c_check->parsed()) {
      json j;
      if (domain == "tube") {
        auto iv = parse_list(interval_arg);
        if (iv.size() != 2) throw ConfigError("config: --interval must be lo,hi");
        auto rep = tube_bound_check(iv[0], iv[1], parse_list(h_list_arg), c_par, nu);
        json rows = json::array();
        std::ostringstream csv;
        csv << "h,sup_h2_B_diag,sup_B_offdiag,basis_size\n";
        for (size_t i = 0; i < rep.h.size(); ++i) {
          rows.push_back({{"h", rep.h[i]},
                          {"diag_sup", rep.diag_sup[i]},
                          {"offdiag_sup", rep.offdiag_sup[i]},
                          {"basis", rep.basis_used[i]}});
          char buf[128];
          snprintf(buf, sizeof buf, "%.6f,%.8f,%.8e,%d\n", rep.h[i], rep.diag_sup[i],
                   rep.offdiag_sup[i], rep.basis_used[i]);
          csv << buf;
        }
        j["value"] = {{"rows", rows},
                      {"diag_ratio", rep.diag_ratio},
                      {"offdiag_slope", rep.offdiag_slope},
                      {"slope_bound", -(1.0 + nu) - 0.2}};
        j["provenance"] = {{"interval", {iv[0], iv[1]}}, {"c", c_par}, {"nu", nu}};
        if (!S.cfg.out.empty()) S.write_file("tube_bounds.csv", csv.str());
      } else if (domain == "disc") {
        auto D = make_disc({0, 0}, 1.0);
        auto K = numeric_kernel(D, 80);
        double worst = 0.0, worst_hyp = 0.0;
        for (int i = 0; i < 200; ++i) {
          double r1 = 0.9 * std::sqrt((i % 17) / 17.0), a1 = TWO_PI * i / 200.0;
          double r2 = 0.9 * std::sqrt((i % 13) / 13.0), a2 = TWO_PI * ((i * 7) % 200) / 200.0;
          cplx z = std::polar(r1, a1), w = std::polar(r2, a2);
          cplx ex = disc_kernel(z, w);
          worst = std::max(worst, std::abs(K.eval(z, w) - ex) / std::abs(ex));
          double rho = disc_distance(z, w);
          double rhs = disc_density(z) * disc_density(w) /
                       (4.0 * M_PI * std::pow(std::cosh(rho / 2), 2));
          worst_hyp = std::max(worst_hyp, std::fabs(std::abs(ex) - rhs) / rhs);
        }
        j["value"] = {{"max_rel_error", worst}, {"berghyp_max_error", worst_hyp}};
        j["provenance"] = {{"N_b", 80}, {"samples", 200}};
      } else {
        throw ConfigError("config: unknown domain " + domain);
      }
      j["error_bound"] = 1e-6;
      return S.finish("bergman_check", j);
    }
    if (c_all->parsed()) {
      json bundle;
      bundle["coding"] = {{"k", S.coding.k},
                          {"D", S.coding.D},
                          {"p0", S.coding.p0},
                          {"ok", S.coding.report.ok}};
      bundle["delta"] = critical_exponent(S.coding, S.rep(),
                                          S.rep() ? S.rep()->beta : 0.0, false,
                                          S.cfg.n_max);
      cplx s(5, 0);
      bundle["zeta_euler"] = cx(euler_product(s, S.rep(), S.coding, S.cfg.L).value);
      bundle["zeta_orbit"] = cx(fredholm_det_orbit(s, S.rep(), S.coding, S.cfg.p_max).value);
      bundle["zeta_matrix"] =
          cx(fredholm_det_matrix(s, S.rep(), S.coding, S.cfg.h, S.cfg.N).value);
      auto tb = tube_bound_check(0.0, 0.3, {0.1, 0.05, 0.025}, 0.5, 0.5);
      bundle["bergman"] = {{"diag_ratio", tb.diag_ratio}, {"slope", tb.offdiag_slope}};
      json j;
      j["value"] = bundle;
      j["error_bound"] = S.cfg.tol;
      j["provenance"] = {{"bundle", "report all"}};
      return S.finish("report_all", j);
    }
    throw ConfigError("no subcommand action matched");
  } catch (const ConfigError& e) {
    fprintf(stderr, "{\"error\":\"config\",\"message\":\"%s\"}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fprintf(stderr, "{\"error\":\"runtime\",\"message\":\"%s\"}\n", e.what());
    return 1;
  }
}
