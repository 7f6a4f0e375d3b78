#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "diaboli/acceptance.hpp"
#include "diaboli/adiabatic.hpp"
#include "diaboli/error.hpp"
#include "diaboli/perturbation.hpp"
#include "diaboli/search.hpp"

namespace {

using namespace diaboli;

// Bad command-line input that CLI11 itself cannot detect.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string source;
  std::string variant = "unscaled";
  std::string out;
  std::uint64_t seed = 0;
};

std::map<std::string, std::string> parse_fields(const std::string& body) {
  std::map<std::string, std::string> fields;
  std::istringstream in(body);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("expected key=value in '" + item + "'");
    fields[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return fields;
}

long parse_integer(const std::map<std::string, std::string>& fields, const std::string& key) {
  const auto it = fields.find(key);
  if (it == fields.end()) throw UsageError("missing '" + key + "'");
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != it->second.size()) throw UsageError("'" + key + "' is not an integer: " + it->second);
  return v;
}

// wc:n=<k>,sol=<i|none>  worst-case diagonal
// rand:n=<k>,m=<m>       random 3-SAT drawn from --seed
// anything else          DIMACS file path
ViolationDiagonal load_instance(const RunConfig& cfg) {
  if (cfg.source.rfind("wc:", 0) == 0) {
    const auto fields = parse_fields(cfg.source.substr(3));
    const long n = parse_integer(fields, "n");
    if (n < 1 || n > kMaxVariables) throw UsageError("wc: n must be in [1, " + std::to_string(kMaxVariables) + "]");
    std::optional<Assignment> sol;
    const auto it = fields.find("sol");
    if (it == fields.end()) throw UsageError("wc: missing 'sol'");
    if (it->second != "none") {
      const long s = parse_integer(fields, "sol");
      if (s < 0 || s >= (1L << n)) throw UsageError("wc: sol out of range");
      sol = static_cast<Assignment>(s);
    }
    return worst_case_diagonal(static_cast<int>(n), sol);
  }
  if (cfg.source.rfind("rand:", 0) == 0) {
    const auto fields = parse_fields(cfg.source.substr(5));
    const long n = parse_integer(fields, "n");
    const long m = parse_integer(fields, "m");
    if (n < 3 || n > kMaxVariables || m < 1) throw UsageError("rand: need 3 <= n <= 16 and m >= 1");
    std::mt19937_64 rng(cfg.seed);
    return violation_diagonal(random_instance(static_cast<int>(n), static_cast<int>(m), rng));
  }
  std::ifstream in(cfg.source);
  if (!in) throw UsageError("cannot open instance file '" + cfg.source + "'");
  return violation_diagonal(parse_dimacs(in));
}

std::pair<double, double> parse_range(const std::string& text) {
  const auto colon = text.find(':', 1);
  if (colon == std::string::npos) throw UsageError("--range expects a:b, got '" + text + "'");
  try {
    std::size_t used_a = 0, used_b = 0;
    const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
    const double lo = std::stod(a, &used_a);
    const double hi = std::stod(b, &used_b);
    if (used_a == a.size() && used_b == b.size()) return {lo, hi};
  } catch (const std::exception&) {
  }
  throw UsageError("--range expects a:b, got '" + text + "'");
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw UsageError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void write_json(std::ostream& out, const nlohmann::json& j) { out << j.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric-phase 3-SAT simulator"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub, bool needs_instance) {
    if (needs_instance) {
      sub->add_option("instance", cfg.source, "DIMACS path, wc:n=<k>,sol=<i|none> or rand:n=<k>,m=<m>")->required();
      sub->add_option("--variant", cfg.variant, "unscaled, z_scaled or x_scaled")->capture_default_str();
    }
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--seed", cfg.seed, "seed for randomized generation")->capture_default_str();
  };

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalue sweep along one parameter axis as CSV");
  add_common(spectrum, true);
  std::string sweep_axis = "x", range = "-1:1";
  double fixed = -1.0;
  int samples = 201, levels = 0;
  spectrum->add_option("--sweep", sweep_axis, "axis to sweep")->check(CLI::IsMember({"x", "z"}))->capture_default_str();
  spectrum->add_option("--fixed", fixed, "value of the other parameter")->capture_default_str();
  spectrum->add_option("--range", range, "sweep range a:b")->capture_default_str();
  spectrum->add_option("--samples", samples, "number of samples")->check(CLI::Range(2, 1000000))->capture_default_str();
  spectrum->add_option("--levels", levels, "lowest levels to emit (0 = all)")->check(CLI::NonNegativeNumber);

  auto* berry = app.add_subcommand("berry", "Berry phase around the default loop as JSON");
  add_common(berry, true);
  std::string transport_path;
  int samples_per_edge = 64;
  bool scramble = false;
  berry->add_option("--transport", transport_path, "also write the transport log CSV here");
  berry->add_option("--samples-per-edge", samples_per_edge, "loop samples per edge")
      ->check(CLI::Range(1, 1000000))
      ->capture_default_str();
  berry->add_flag("--scramble-gauge", scramble, "randomize eigenvector signs from --seed before alignment");

  auto* predict = app.add_subcommand("predict-gap", "second-order gap prediction vs exact minimum as JSON");
  add_common(predict, true);
  double z = 0.0, x_max = 0.5;
  int predict_samples = 501;
  predict->add_option("--z", z, "z value of the x sweep")->required();
  predict->add_option("--x-max", x_max, "sweep x over [0, x-max]")->check(CLI::PositiveNumber)->capture_default_str();
  predict->add_option("--samples", predict_samples, "coarse samples")->check(CLI::Range(3, 1000000))->capture_default_str();

  auto* evolve_cmd = app.add_subcommand("evolve", "time evolution around the default loop as CSV");
  add_common(evolve_cmd, true);
  Schedule schedule;
  std::string profile = "uniform", summary_path;
  evolve_cmd->add_option("--time", schedule.total_time, "total loop time T")->required();
  evolve_cmd->add_option("--profile", profile, "uniform or adaptive")
      ->check(CLI::IsMember({"uniform", "adaptive", "gap_adaptive"}))
      ->capture_default_str();
  evolve_cmd->add_option("--steps", schedule.steps, "time steps")->capture_default_str();
  evolve_cmd->add_option("--min-speed", schedule.min_speed_fraction, "adaptive speed floor / mean")
      ->capture_default_str();
  evolve_cmd->add_option("--summary", summary_path, "write the summary JSON here");

  auto* solve_cmd = app.add_subcommand("solve", "bisection search for a satisfying assignment as JSON");
  add_common(solve_cmd, true);
  std::string oracle_name = "berry";
  solve_cmd->add_option("--oracle", oracle_name, "berry or brute")
      ->check(CLI::IsMember({"berry", "brute"}))
      ->capture_default_str();

  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  add_common(selftest, false);
  std::vector<std::string> only;
  selftest->add_option("--only", only, "criterion ids to run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  }

  try {
    Output output(cfg.out);
    std::ostream& out = output.stream();
    if (selftest->parsed()) {
      const auto results = acceptance::run(out, only);
      for (const auto& r : results) {
        if (!r.passed) return 2;
      }
      return 0;
    }

    const Variant variant = [&] {
      try {
        return parse_variant(cfg.variant);
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
    }();
    const auto diag = load_instance(cfg);

    if (spectrum->parsed()) {
      const auto [lo, hi] = parse_range(range);
      const SweepSpec spec{sweep_axis == "x" ? SweepAxis::X : SweepAxis::Z, fixed, lo, hi, samples};
      write_sweep_csv(out, diag, variant, spec, static_cast<std::size_t>(levels));
    } else if (berry->parsed()) {
      BerryOptions options;
      if (scramble) options.gauge_scramble_seed = cfg.seed;
      const auto result = berry_phase(diag, variant, LoopPath::default_rectangle(samples_per_edge), options);
      write_json(out, to_json(result));
      if (!transport_path.empty()) {
        std::ofstream csv(transport_path, std::ios::binary);
        if (!csv) throw UsageError("cannot write '" + transport_path + "'");
        write_transport_csv(csv, result);
      }
    } else if (predict->parsed()) {
      write_json(out, to_json(prediction_error(diag, z, variant, x_max, predict_samples)));
    } else if (evolve_cmd->parsed()) {
      schedule.profile = parse_profile(profile);
      const auto result = evolve(diag, variant, LoopPath::default_rectangle(), schedule, true);
      if (!summary_path.empty()) {
        std::ofstream js(summary_path, std::ios::binary);
        if (!js) throw UsageError("cannot write '" + summary_path + "'");
        write_json(js, to_json(result, schedule));
      }
      write_evolution_csv(out, result);
    } else if (solve_cmd->parsed()) {
      const auto oracle = oracle_name == "berry" ? berry_oracle(variant) : brute_oracle();
      write_json(out, to_json(solve(diag, oracle)));
    }
    out.flush();
    if (!out) throw UsageError("write failed");
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
