#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace causalshift::cli {

enum class Format { json, csv };

struct RunConfig {
  std::string command;
  /// "hydrogen-1s2p" (built in) or a path to a preset or report JSON file.
  std::string preset = "hydrogen-1s2p";
  Format format = Format::json;
  std::string out;  // empty: standard output
  unsigned threads = 1;
  std::optional<double> rel_tol;

  // gamma
  int denominator_power = 5;
  bool ww_check = false;

  // shift / series-check
  double C0 = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  std::string weight = "direct";
  int random_triples = 0;
  unsigned seed = 12345;

  // split-check
  double u_min = 1.05;
  double u_max = 5.0;
  int points = 50;
  std::string closed_form = "central";
  double shift_q = 0.5;

  // wavepacket-check
  double wp_delta_u = 1e-2;
  double ramp_periods = 10.0;
  std::optional<double> ramp_fraction;
  std::vector<double> plateau_periods{10.0, 100.0, 1000.0, 10000.0};

  // ww-sim
  int n_modes = 4000;
  double bandwidth_gamma = 200.0;
  std::optional<double> detuning_lo_gamma;
  std::optional<double> detuning_hi_gamma;
  double t_end_gamma = 6.0;
  double dt_gamma = 5e-4;
  int stride = 20;
  std::string summary_path;
};

/// Executes a parsed configuration. Exit codes: 0 success, 1 computation or
/// output failure (diagnostic JSON written to `err`), 2 usage error.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv into `config`. Returns an exit code when the program should
/// stop (help requested or usage error), nothing otherwise.
std::optional<int> parse(int argc, const char* const* argv, RunConfig& config, std::ostream& out,
                         std::ostream& err);

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Serializes with stable key order and 17 significant digits; non-finite
/// numbers become null.
std::string dump_json(const nlohmann::ordered_json& j);

std::string format_number(double v);

}  // namespace causalshift::cli
