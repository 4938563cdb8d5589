#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fas/correlation.hpp"
#include "fas/errors.hpp"
#include "fas/special_functions.hpp"
#include "fas/sweep.hpp"
#include "fas/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitCompare = 4;

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fas::ConfigError("cannot open config file '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw fas::ConfigError("config parse error in '" + path + "': " + e.what());
  }
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fas::ConfigError("cannot open output file '" + path + "'");
  out << text;
}

int run_selftest() {
  int failures = 0;
  auto check = [&](bool ok, const std::string& name) {
    std::cout << (ok ? "[ok]   " : "[FAIL] ") << name << '\n';
    if (!ok) ++failures;
  };

  using namespace fas;

  // Marcum-Q behaves like a survival function and matches the gamma kernel.
  {
    bool ok = true;
    SplitMix64 rng(42);
    for (int i = 0; i < 200 && ok; ++i) {
      const int n = 1 + int(rng.next_u64() % 6);
      const double a = 6.0 * rng.next_unit();
      const double b = 6.0 * rng.next_unit();
      const double q = marcum_q(n, a, b);
      ok = ok && q >= 0.0 && q <= 1.0;
      ok = ok && marcum_q(n, a + 0.3, b) >= q - 1e-12;
      ok = ok && marcum_q(n, a, b + 0.3) <= q + 1e-12;
      ok = ok && marcum_q(n + 1, a, b) >= q - 1e-12;
      if (a < b) ok = ok && q >= std::exp(-0.5 * b * b) - 1e-12;
    }
    for (int i = 0; i < 50 && ok; ++i) {
      const int n = 1 + int(rng.next_u64() % 6);
      const double b = 8.0 * rng.next_unit();
      ok = ok && std::fabs(marcum_q(n, 0.0, b) -
                           (1.0 - regularized_lower_gamma(n, 0.5 * b * b))) < 1e-12;
    }
    check(ok, "marcum-q monotonicity, bounds, gamma consistency");
  }

  // Four-case port correlation equals the explicit Kronecker product.
  {
    bool ok = true;
    SplitMix64 rng(7);
    for (int mr = 1; mr <= 4 && ok; ++mr)
      for (int mt = 1; mt <= 4 && ok; ++mt) {
        const double r1 = 0.95 * rng.next_unit();
        const double r2 = 0.95 * rng.next_unit();
        const auto K = build_kronecker({mr, mt, r1, r2});
        const auto RR = equicorrelated_amplitude(mr, r1);
        const auto RT = equicorrelated_amplitude(mt, r2);
        for (int j1 = 0; j1 < mt; ++j1)
          for (int i1 = 0; i1 < mr; ++i1)
            for (int j2 = 0; j2 < mt; ++j2)
              for (int i2 = 0; i2 < mr; ++i2)
                ok = ok && std::fabs(K.entries(j1 * mr + i1, j2 * mr + i2) -
                                     RT.entries(j1, j2) * RR.entries(i1, i2)) < 1e-14;
        ok = ok && is_positive_semidefinite(K.entries);
      }
    check(ok, "kronecker four-case rule vs explicit product, PSD");
  }

  // Bound sandwich at a handful of configurations.
  {
    bool ok = true;
    for (double rho : {0.0, 0.5, 0.9}) {
      const MisoConfig cfg{2, 5, rho, 1.0};
      const Threshold th = Threshold::linear(1.0);
      const double lo = miso_op_lower(cfg, th).value;
      const double ex = miso_exact_op(cfg, th).value;
      const double up_d = miso_op_upper(cfg, th, BoundVariant::as_derived).value;
      const double up_p = miso_op_upper(cfg, th, BoundVariant::as_printed).value;
      ok = ok && lo <= ex + 1e-9 && ex <= up_d + 1e-9 && up_d <= up_p + 1e-9;
      const DualConfig dcfg{3, 2, rho, 0.4, 1.0};
      const double dlo = dual_op_lower(dcfg, th).value;
      const double dex = dual_exact_op(dcfg, th).value;
      const double dup = dual_op_upper(dcfg, th).value;
      ok = ok && dlo <= dex + 1e-9 && dex <= dup + 1e-9;
    }
    check(ok, "bound sandwich (single-end and dual-end)");
  }

  // Monte Carlo determinism and agreement with the exact integral.
  {
    const MisoConfig cfg{2, 5, 0.9, 1.0};
    const Threshold th = Threshold::linear(1.0);
    const McEstimate a = estimate_op_miso(cfg, th, 100000, 99);
    const McEstimate b = estimate_op_miso(cfg, th, 100000, 99);
    McOptions serial;
    serial.n_threads = 1;
    const McEstimate c = estimate_op_miso(cfg, th, 100000, 99, serial);
    const double exact = miso_exact_op(cfg, th).value;
    bool ok = a.outages == b.outages && a.outages == c.outages;
    ok = ok && std::fabs(a.p_hat - exact) <= std::max(3.0 * a.ci_half_width(), 2e-3);
    check(ok, "mc determinism across runs/threads, 3-sigma agreement with exact");
  }

  // dB conversion anchors.
  {
    bool ok = std::fabs(Threshold::from_db(0.0).value() - 1.0) < 1e-12 &&
              std::fabs(Threshold::from_db(3.0).value() - 1.9953) < 1e-4 &&
              std::fabs(Threshold::from_db(10.0).value() - 10.0) < 1e-12;
    check(ok, "dB/linear conversion table");
  }

  std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED") << '\n';
  return failures == 0 ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fas-outage-lab: outage probability of fluid antenna systems over "
               "correlated Rayleigh fading"};
  app.set_version_flag("--version", std::string("fas-outage-lab v") + fas::kVersion);
  app.require_subcommand(1);

  std::string config_path, output_path, figure_name;
  bool with_mc = false;
  std::uint64_t fig_trials = 1000000, fig_seed = 1;

  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep from a JSON config");
  sweep->add_option("config", config_path, "JSON config file")->required();
  sweep->add_option("-o,--output", output_path, "output CSV path (default: stdout)");

  auto* figure = app.add_subcommand("figure", "emit the sweep behind a named figure preset");
  figure->add_option("name", figure_name, "preset name (fig3..fig10)")->required();
  figure->add_option("-o,--output", output_path, "output CSV path (default: stdout)");
  figure->add_flag("--with-mc", with_mc, "add Monte Carlo columns");
  figure->add_option("--trials", fig_trials, "Monte Carlo trials per point (with --with-mc)");
  figure->add_option("--seed", fig_seed, "master seed for Monte Carlo columns");

  auto* diversity = app.add_subcommand("diversity", "fit a diversity order from a JSON config");
  diversity->add_option("config", config_path, "JSON config file")->required();
  diversity->add_option("-o,--output", output_path, "output JSON path (default: stdout)");

  auto* compare = app.add_subcommand("compare", "exact vs Monte Carlo with pass/fail per row");
  compare->add_option("config", config_path, "JSON config file")->required();

  auto* selftest = app.add_subcommand("selftest", "run the built-in invariant suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) {
      const fas::SweepSpec spec = fas::sweep_spec_from_json(load_json(config_path));
      write_output(fas::to_csv(fas::run_sweep(spec)), output_path);
      return kExitOk;
    }
    if (figure->parsed()) {
      const auto preset = fas::figure_preset_from_name(figure_name);
      if (!preset) throw fas::ConfigError("unknown figure preset '" + figure_name + "'");
      fas::FigureOptions opts;
      opts.with_mc = with_mc;
      opts.trials = fig_trials;
      opts.seed = fig_seed;
      write_output(fas::to_csv(fas::run_figure_preset(*preset, opts)), output_path);
      return kExitOk;
    }
    if (diversity->parsed()) {
      const nlohmann::json out = fas::run_diversity_json(load_json(config_path));
      write_output(out.dump(2) + "\n", output_path);
      return kExitOk;
    }
    if (compare->parsed()) {
      const fas::SweepSpec spec = fas::sweep_spec_from_json(load_json(config_path));
      const auto rows = fas::run_compare(spec);
      bool all_pass = true;
      for (const auto& r : rows) {
        std::printf("%s %s=%.6g exact=%.8g mc=%.8g |diff|=%.3g tol=%.3g\n",
                    r.pass ? "[pass]" : "[FAIL]", spec.swept.c_str(), r.swept_value, r.op_exact,
                    r.op_mc, std::fabs(r.op_exact - r.op_mc), r.tolerance);
        all_pass = all_pass && r.pass;
      }
      return all_pass ? kExitOk : kExitCompare;
    }
    if (selftest->parsed()) return run_selftest();
  } catch (const fas::ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const fas::DegenerateFitError& e) {
    std::cerr << "convergence failure: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const fas::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
