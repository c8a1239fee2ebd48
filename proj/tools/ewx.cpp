/*
   Copyright 2026 The eulerexp Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "config.hpp"
#include "eulerexp/edgeworth.hpp"
#include "eulerexp/errorproc.hpp"
#include "eulerexp/experiments.hpp"
#include "eulerexp/grid.hpp"
#include "eulerexp/limitlaw.hpp"
#include "eulerexp/malliavin.hpp"
#include "eulerexp/pathsim.hpp"
#include "eulerexp/rng.hpp"
#include "eulerexp/symbol.hpp"

namespace fs = std::filesystem;
using namespace eulerexp;

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Overrides {
  std::string config;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::string out;
  int workers = 0;
  std::string kind = "studentized";
  bool dump = false;
  bool binary = false;
};

ewx::RunConfig load(const Overrides& o) {
  ewx::RunConfig cfg = ewx::parse_config(o.config);
  if (const char* e = std::getenv("EWX_OUT_DIR"); e && *e) cfg.experiment.output_dir = e;
  if (const char* e = std::getenv("EWX_WORKERS"); e && *e) {
    const int w = std::atoi(e);
    if (w < 1) throw ewx::ConfigError({"EWX_WORKERS: must be >= 1"});
    cfg.experiment.workers = w;
  }
  if (o.has_seed) cfg.mc.seed = o.seed;
  if (!o.out.empty()) cfg.experiment.output_dir = o.out;
  if (o.workers > 0) cfg.experiment.workers = o.workers;
  fs::create_directories(cfg.experiment.output_dir);
  return cfg;
}

void save(const ewx::RunConfig& cfg, const std::string& name, const Table& t) {
  const fs::path p = fs::path(cfg.experiment.output_dir) / name;
  std::ofstream os(p, std::ios::binary);
  write_csv(os, t);
  std::cout << "wrote " << p.string() << "\n";
}

std::shared_ptr<const TimeGrid> config_grid(const ewx::RunConfig& cfg, int n) {
  const int root = cfg.grid.root > 0
                       ? cfg.grid.root
                       : *std::min_element(cfg.grid.n_list.begin(), cfg.grid.n_list.end());
  return std::make_shared<const TimeGrid>(make_grid(n, cfg.grid.m, cfg.grid.T_points, root));
}

int max_n(const ewx::RunConfig& cfg) {
  return *std::max_element(cfg.grid.n_list.begin(), cfg.grid.n_list.end());
}

std::string hex(const unsigned char* d, unsigned len) {
  std::ostringstream s;
  for (unsigned i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << int(d[i]);
  return s.str();
}

// Git-style blob hash: sha1("blob <size>\0" + content).
std::string blob_hash(const std::string& content) {
  const std::string head = "blob " + std::to_string(content.size()) + '\0';
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr);
  EVP_DigestUpdate(ctx, head.data(), head.size());
  EVP_DigestUpdate(ctx, content.data(), content.size());
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  return hex(md, len);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Per-path symbol coefficients at T_points[0] on the largest grid.
std::vector<SymbolCoefficients> symbol_sample(const ewx::RunConfig& cfg,
                                              std::vector<LimitLawProfile>* profiles,
                                              std::vector<MarginalSample>* marginal) {
  const DiffusionModel model = ewx::make_model(cfg);
  auto g = config_grid(cfg, max_n(cfg));
  const int T = g->T_index[0];
  const Campaign c = ewx::make_campaign(cfg);
  std::vector<SymbolCoefficients> h(cfg.mc.M);
  if (profiles) profiles->resize(cfg.mc.M);
  if (marginal) marginal->resize(cfg.mc.M);
  parallel_for(cfg.mc.M, cfg.experiment.workers, [&](std::size_t i) {
    CoupledPaths cp = simulate_coupled(model, g, cfg.mc.seed, i);
    LimitLawProfile pr = limit_law_profile(cp, T);
    VariationState vs = first_variation(cp);
    MalliavinBand band = malliavin_band(cp, vs, T);
    h[i] = h_coefficients(cp, pr, band, c.weight);
    if (marginal) {
      MarginalSample& s = (*marginal)[i];
      s.Sigma = pr.Sigma_T;
      s.C = pr.C_T;
      s.symbol = anticipative_symbol(cp, pr.K, band, {{band.DSigma_T, band.DDSigma_T}},
                                     c.weight);
      add_adaptive_part(s.symbol, pr);
    }
    if (profiles) (*profiles)[i] = std::move(pr);
  });
  return h;
}

int cmd_simulate(const Overrides& o) {
  ewx::RunConfig cfg = load(o);
  const DiffusionModel model = ewx::make_model(cfg);
  for (int n : cfg.grid.n_list) {
    auto g = config_grid(cfg, n);
    const int T = g->T_index[0];
    const std::size_t M = cfg.mc.M;
    std::vector<ErrorFunctionals> fx(M);
    std::vector<CoupledPaths> keep;
    const std::size_t ndump = o.dump ? std::max<std::size_t>(1, cfg.experiment.dump_paths) : 0;
    std::vector<CoupledPaths> paths(o.binary ? M : std::min(ndump, M));
    std::vector<double> xr(M), xe(M);
    parallel_for(M, cfg.experiment.workers, [&](std::size_t i) {
      CoupledPaths cp = simulate_coupled(model, g, cfg.mc.seed, i);
      fx[i] = error_functionals(cp);
      xr[i] = cp.X_ref[T];
      xe[i] = cp.X_euler[T];
      if (i < paths.size()) paths[i] = std::move(cp);
    });
    Table t{{"stream", "X_ref", "X_euler", "V", "Vbar", "N"}, {}, {}};
    for (std::size_t i = 0; i < M; ++i) {
      t.rows.push_back({double(i), xr[i], xe[i], fx[i].V[T], fx[i].Vbar[T], fx[i].N[T]});
    }
    save(cfg, "functionals_n" + std::to_string(n) + ".csv", t);
    for (std::size_t i = 0; i < std::min(ndump, M); ++i) {
      Table d{{"t", "X_ref", "X_euler", "V", "Vbar", "N"}, {}, {}};
      for (int k = 0; k <= g->steps(); ++k) {
        d.rows.push_back({g->times[k], paths[i].X_ref[k], paths[i].X_euler[k], fx[i].V[k],
                          fx[i].Vbar[k], fx[i].N[k]});
      }
      save(cfg, "path_n" + std::to_string(n) + "_s" + std::to_string(i) + ".csv", d);
    }
    if (o.binary) {
      const fs::path p = fs::path(cfg.experiment.output_dir) / ("paths_n" + std::to_string(n) + ".ewp");
      std::ofstream os(p, std::ios::binary);
      write_path_dump(os, *g, paths);
      std::cout << "wrote " << p.string() << "\n";
    }
  }
  return kOk;
}

int cmd_coefficients(const Overrides& o) {
  ewx::RunConfig cfg = load(o);
  std::vector<LimitLawProfile> prof;
  std::vector<SymbolCoefficients> h = symbol_sample(cfg, &prof, nullptr);
  Table t{{"stream", "X_T", "Sigma_T", "C_T", "S_T", "A3_T", "mu_T", "theta_11", "theta_21",
           "theta_31", "theta_22", "theta_32", "theta_33", "theta_min_eig", "psd_violations",
           "H1", "H2", "H3", "H4", "H5", "H6", "H7", "H8"},
          {}, {}};
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto& p = prof[i];
    std::vector<double> r{double(i), p.X_T,          p.Sigma_T,        p.C_T,
                          p.S_T,     p.A3_T,         p.mu_T,           p.theta.t11(),
                          p.theta.t21(), p.theta.t31(), p.theta.t22(), p.theta.t32(),
                          p.theta.t33(), p.theta.min_eigenvalue, double(p.theta.psd_violations)};
    for (int j = 1; j <= 8; ++j) r.push_back(h[i].H[j]);
    t.rows.push_back(r);
  }
  save(cfg, "coefficients.csv", t);
  {
    auto g = config_grid(cfg, max_n(cfg));
    const LimitLawProfile& p = prof.front();
    Table q{{"t", "K", "v2", "u11", "u13", "u22", "u33"}, {}, {}};
    for (int k = 0; k <= p.T_index; ++k) {
      q.rows.push_back({g->times[k], p.K[k], p.u.v2[k], p.u.u11[k], p.u.u13[k], p.u.u22[k],
                        p.u.u33[k]});
    }
    save(cfg, "profile_s0.csv", q);
  }
  try {
    StudentizedCoefficients a = studentized_coeffs(studentized_moments(h));
    Table s{{"a1", "a1_se", "a2", "a2_se", "a3", "a3_se"}, {{a.a1, a.se1, a.a2, a.se2, a.a3, a.se3}}, {}};
    save(cfg, "studentized_coefficients.csv", s);
  } catch (const DegenerateModelError& e) {
    std::cerr << "studentized coefficients skipped: " << e.what() << "\n";
  }
  return kOk;
}

int cmd_density(const Overrides& o) {
  ewx::RunConfig cfg = load(o);
  const double n = max_n(cfg);
  if (o.kind == "studentized") {
    std::vector<SymbolCoefficients> h = symbol_sample(cfg, nullptr, nullptr);
    StudentizedDensity d(studentized_coeffs(studentized_moments(h)), n);
    const Eigen::VectorXd ys = Eigen::VectorXd::LinSpaced(401, -5, 5);
    std::ofstream os(fs::path(cfg.experiment.output_dir) / "density_studentized.csv", std::ios::binary);
    write_density_csv(os, "y,phi", d.table(ys));
    if (d.has_negative_part()) std::cerr << "note: corrected density is negative somewhere\n";
  } else if (o.kind == "pair") {
    std::vector<SymbolCoefficients> h = symbol_sample(cfg, nullptr, nullptr);
    PairDensity d(h, n);
    std::ofstream os(fs::path(cfg.experiment.output_dir) / "density_pair.csv", std::ios::binary);
    if (d.deterministic_C()) {
      const double s = std::sqrt(d.C0());
      std::vector<DensityRow> rows;
      for (double z : Eigen::VectorXd::LinSpaced(401, -6 * s, 6 * s)) {
        DensityRow r;
        r.x = z;
        r.order0 = normal_pdf(z, d.C0());
        r.total = d.z_density(z);
        r.correction = r.total - r.order0;
        r.rectified = std::max(0.0, r.total);
        rows.push_back(r);
      }
      write_density_csv(os, "z,order0", rows);
    } else {
      os << "z,x,order0,correction,total,rectified,stderr\n" << std::setprecision(17);
      const double lo = d.support_lo(), hi = d.support_hi();
      for (double x : Eigen::VectorXd::LinSpaced(41, std::log(lo), std::log(hi))) {
        const double cx = std::exp(x), s = std::sqrt(cx);
        for (double z : Eigen::VectorXd::LinSpaced(81, -6 * s, 6 * s)) {
          const double o0 = d.order0(z, cx), cr = d.correction(z, cx);
          os << z << ',' << cx << ',' << o0 << ',' << cr << ',' << o0 + cr << ','
             << std::max(0.0, o0 + cr) << ",nan\n";
        }
      }
    }
  } else if (o.kind == "marginal") {
    std::vector<MarginalSample> ms;
    symbol_sample(cfg, nullptr, &ms);
    MarginalVDensity d(ms, n);
    const double s = d.scale();
    std::ofstream os(fs::path(cfg.experiment.output_dir) / "density_marginal.csv", std::ios::binary);
    write_density_csv(os, "v,order0", d.table(Eigen::VectorXd::LinSpaced(401, -8 * s, 8 * s)));
  } else {
    std::cerr << "unknown density kind '" << o.kind << "'\n";
    return kUsage;
  }
  std::cout << "wrote density_" << o.kind << ".csv\n";
  return kOk;
}

struct CheckLine {
  std::string name;
  bool pass;
  std::string measured;
};

int cmd_validate(const Overrides& o) {
  ewx::RunConfig cfg = load(o);
  const DiffusionModel model = ewx::make_model(cfg);
  std::vector<CheckLine> lines;
  auto add = [&](std::string name, bool pass, double value) {
    std::ostringstream s;
    s << std::setprecision(6) << value;
    lines.push_back({std::move(name), pass, s.str()});
  };
  {
    auto r = Philox4x32::apply({0, 0, 0, 0}, {0, 0});
    add("rng.philox_known_vector", r[0] == 0x6627e8d5u && r[3] == 0x9b00dbd8u, 0);
  }
  {
    std::vector<double> xs;
    for (int k = -4; k <= 4; ++k) xs.push_back(model.x0 * (1 + 0.1 * k) + 0.05 * k);
    DerivativeReport rep = check_derivatives(model, xs, 1e-4);
    double worst = 0;
    for (const auto& p : rep.pairs) worst = std::max(worst, p.max_mismatch);
    add("model.coded_derivatives", rep.ok(), worst);
  }
  auto g = config_grid(cfg, max_n(cfg));
  const int T = g->T_index[0];
  {
    CoupledPaths a = simulate_coupled(model, g, cfg.mc.seed, 0);
    CoupledPaths b = simulate_coupled(model, g, cfg.mc.seed, 0);
    add("pathsim.determinism", a.X_euler == b.X_euler && a.X_ref == b.X_ref, 0);
  }
  const std::size_t P = std::min<std::size_t>(cfg.mc.M, 200);
  double min_C = 1e300, cs = 0, ident = 0, zero = 0;
  int psd = 0;
  bool nonneg = true;
  std::vector<SymbolCoefficients> h(P);
  for (std::size_t i = 0; i < P; ++i) {
    CoupledPaths cp = simulate_coupled(model, g, cfg.mc.seed, i);
    LimitLawProfile pr = limit_law_profile(cp, T);
    min_C = std::min(min_C, pr.C_T);
    psd += pr.theta.psd_violations;
    zero = std::max({zero, std::abs(pr.theta.t21()), std::abs(pr.theta.t32())});
    for (int k = 0; k <= T; ++k) {
      const auto& u = pr.u;
      if (u.u11[k] < 0 || u.u22[k] < 0 || u.u33[k] < 0) nonneg = false;
      const double bound = std::sqrt(u.u11[k] * u.u33[k]) * (1 + 1e-12);
      if (bound > 0) cs = std::max(cs, std::abs(u.u13[k]) / bound);
    }
    VariationState vs = first_variation(cp);
    MalliavinBand band = malliavin_band(cp, vs, T);
    h[i] = h_coefficients(cp, pr, band, ewx::make_campaign(cfg).weight);
    const auto& H = h[i].H;
    const double scale = std::max({std::abs(H[5]), std::abs(H[7]), 1e-300});
    ident = std::max({ident, std::abs(H[4] - H[5] / 2) / scale, std::abs(4 * H[6] - H[7]) / scale,
                      std::abs(H[7] - H[8]) / scale});
  }
  add("limitlaw.C_nonnegative", min_C >= 0, min_C);
  add("limitlaw.u_nonnegative", nonneg, 0);
  add("limitlaw.cauchy_schwarz_u13", cs <= 1.0, cs);
  add("limitlaw.theta_psd", psd == 0, psd);
  add("limitlaw.theta_zero_pattern", zero == 0, zero);
  add("symbol.identities", ident < 1e-8, ident);
  add("edgeworth.hermite_values",
      hermite(3, 0.0) == 0 && hermite(3, 1.0) == -2 && hermite(5, 1.0) == 6, 0);
  if (min_C > 0) {
    StudentizedDensity d(studentized_coeffs(studentized_moments(h)), max_n(cfg));
    const double total = integrate_adaptive([&](double y) { return d.evaluate(y).total; }, -12, 12, 1e-12);
    const double corr = integrate_adaptive([&](double y) { return d.evaluate(y).correction; }, -12, 12, 1e-12);
    add("edgeworth.studentized_normalization", std::abs(total - 1) < 1e-6, total - 1);
    add("edgeworth.correction_integral", std::abs(corr) < 1e-6, corr);
  } else {
    std::cout << "SKIP edgeworth.studentized_normalization (C_T = 0: degenerate model)\n";
  }
  bool ok = true;
  for (const auto& l : lines) {
    std::cout << (l.pass ? "PASS " : "FAIL ") << l.name << " measured=" << l.measured << "\n";
    ok = ok && l.pass;
  }
  return ok ? kOk : kFail;
}

void save_fit(Table& fits, const std::string& label, const LineFit& f) {
  fits.labels.push_back(label);
  fits.rows.push_back({f.slope, f.slope_se, f.intercept, f.intercept_se});
}

int cmd_rates(const Overrides& o) {
  ewx::RunConfig cfg = load(o);
  Campaign c = ewx::make_campaign(cfg);
  std::vector<std::string> which = cfg.experiment.campaigns;
  if (which.empty()) which = {"strong", "weak"};
  Table fits{{"campaign", "slope", "slope_se", "intercept", "intercept_se"}, {}, {}};
  for (const auto& name : which) {
    if (name == "strong") {
      for (double p : cfg.experiment.p) {
        bool predict = true;
        StrongResult r;
        try {
          r = strong_error(c, p, true);
        } catch (const DegenerateModelError& e) {
          std::cerr << "strong prediction skipped: " << e.what() << "\n";
          predict = false;
          r = strong_error(c, p, false);
        }
        (void)predict;
        std::ostringstream nm;
        nm << "strong_p" << p;
        save(cfg, nm.str() + ".csv", r.table());
        save_fit(fits, nm.str(), r.fit);
      }
    } else if (name == "weak") {
      auto fns = cfg.experiment.test_functions;
      if (fns.empty()) fns = {"x^2"};
      for (std::size_t k = 0; k < fns.size(); ++k) {
        WeakResult r = weak_error(c, parse_test_function(fns[k]), true);
        if (!r.warning.empty()) std::cerr << "warning: " << r.warning << "\n";
        save(cfg, "weak_f" + std::to_string(k) + ".csv", r.table());
        save_fit(fits, "weak_f" + std::to_string(k), r.fit);
        Table s{{"constant", "constant_se", "empirical_constant", "empirical_constant_se", "crn_ok"},
                {{r.constant, r.constant_se, r.empirical_constant, r.empirical_constant_se,
                  r.crn_ok ? 1.0 : 0.0}},
                {}};
        save(cfg, "weak_f" + std::to_string(k) + "_constant.csv", s);
      }
    } else if (name == "clt") {
      save(cfg, "clt.csv", clt_validation(c).table());
    } else if (name == "density") {
      DensityImprovementResult r = density_improvement(c);
      save(cfg, "density_improvement.csv", r.table());
      save_fit(fits, "density_d0", r.fit0);
      save_fit(fits, "density_d1", r.fit1);
    } else if (name == "variance") {
      save(cfg, "variance.csv", to_table(limit_variance(c)));
    } else if (name == "leading") {
      save(cfg, "leading.csv", to_table(leading_term_sup(c)));
    } else if (name == "second_order") {
      save(cfg, "second_order.csv", to_table(second_order(c)));
    }
  }
  save(cfg, "fits.csv", fits);
  return kOk;
}

int cmd_report(const Overrides& o) {
  ewx::RunConfig cfg = load(o);
  nlohmann::ordered_json m;
  m["config_hash"] = blob_hash(cfg.source.dump());
  m["seed"] = cfg.mc.seed;
  m["input_hash"] = blob_hash(read_file(o.config));
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(cfg.experiment.output_dir)) {
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  nlohmann::ordered_json tables = nlohmann::ordered_json::object();
  for (const auto& f : files) tables[f.filename().string()] = blob_hash(read_file(f));
  m["tables"] = tables;
  const fs::path p = fs::path(cfg.experiment.output_dir) / "manifest.json";
  std::ofstream os(p, std::ios::binary);
  os << m.dump(2) << "\n";
  std::cout << m.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Euler error expansion experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides o;
  app.add_option("--seed", o.seed, "override mc.seed")->each([&](const std::string&) { o.has_seed = true; });
  app.add_option("--out", o.out, "override experiment.output_dir");
  app.add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);

  struct Sub {
    const char* name;
    const char* help;
    int (*fn)(const Overrides&);
  };
  const Sub subs[] = {{"simulate", "simulate coupled paths and error functionals", cmd_simulate},
                      {"coefficients", "limit-law profiles and symbol coefficients", cmd_coefficients},
                      {"density", "evaluate expansion densities", cmd_density},
                      {"validate", "run the invariant suite", cmd_validate},
                      {"rates", "run Monte Carlo campaigns", cmd_rates},
                      {"report", "write the JSON manifest", cmd_report}};
  int (*chosen)(const Overrides&) = nullptr;
  for (const auto& s : subs) {
    CLI::App* sc = app.add_subcommand(s.name, s.help);
    sc->add_option("config", o.config, "JSON run configuration")->required();
    if (std::string(s.name) == "density") {
      sc->add_option("--kind", o.kind, "studentized, pair or marginal");
    }
    if (std::string(s.name) == "simulate") {
      sc->add_flag("--dump", o.dump, "per-path functional CSVs");
      sc->add_flag("--binary", o.binary, "binary path dump");
    }
    sc->callback([&chosen, fn = s.fn] { chosen = fn; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kUsage;
  }
  try {
    return chosen(o);
  } catch (const ewx::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
