#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fas/analytic.hpp"

namespace fas {

enum class Model { miso, dual, rx_siso };
enum class ThresholdUnit { linear, db };

// One experiment axis: hold `fixed`, sweep `swept` over `values`, evaluate
// the requested methods at every point.
struct SweepSpec {
  Model model = Model::miso;
  std::map<std::string, double> fixed;
  std::string swept;
  std::vector<double> values;
  std::vector<Method> methods{Method::exact};
  std::uint64_t trials = 1000000;
  std::uint64_t seed = 0;
  ThresholdUnit threshold_unit = ThresholdUnit::linear;
  BoundVariant bound_variant = BoundVariant::as_printed;

  void validate() const;  // throws ConfigError with field-level messages
  bool operator==(const SweepSpec&) const = default;
};

SweepSpec sweep_spec_from_json(const nlohmann::json& j);
nlohmann::json sweep_spec_to_json(const SweepSpec& spec);

struct SweepRow {
  std::string curve;  // empty unless the table carries multiple curves
  double swept_value = 0.0;
  std::optional<double> op_exact, op_upper, op_lower, op_mc, mc_ci_low, mc_ci_high;
};

struct SweepTable {
  std::uint64_t seed = 0;
  std::vector<std::string> metadata;  // emitted as "# ..." comment lines
  std::string swept_name;
  bool has_curves = false;
  std::vector<Method> methods;
  std::vector<SweepRow> rows;
};

SweepTable run_sweep(const SweepSpec& spec);

// CSV serialization: "# fas-outage-lab v<version> seed=<seed>" first, then the
// remaining metadata comments, a header row, and one row per point with
// 17-significant-digit values. No timestamps; identical inputs give
// byte-identical output.
std::string to_csv(const SweepTable& table);

enum class FigurePreset { fig3, fig4, fig5, fig6, fig7, fig8, fig9, fig10 };

std::optional<FigurePreset> figure_preset_from_name(const std::string& name);
const char* figure_preset_name(FigurePreset which);

struct FigureOptions {
  bool with_mc = false;  // presets default to analytic columns only
  std::uint64_t trials = 1000000;
  std::uint64_t seed = 1;
};

SweepTable run_figure_preset(FigurePreset which, const FigureOptions& opts = {});

struct CompareRow {
  double swept_value = 0.0;
  double op_exact = 0.0;
  double op_mc = 0.0;
  double ci_half_width = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// Exact vs Monte Carlo per sweep point: pass when
// |exact - mc| <= max(3 * Wilson half-width, 2e-3).
std::vector<CompareRow> run_compare(const SweepSpec& spec);

// Diversity-order fit from a JSON config {model, params..., fit_lo, fit_hi,
// n_points}; returns {model, slope, fit_lo, fit_hi, r_squared, n_points}.
nlohmann::json run_diversity_json(const nlohmann::json& cfg);

}  // namespace fas
