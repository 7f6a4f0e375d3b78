#include "diaboli/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "diaboli/adiabatic.hpp"
#include "diaboli/error.hpp"
#include "diaboli/format.hpp"
#include "diaboli/perturbation.hpp"
#include "diaboli/search.hpp"

namespace diaboli::acceptance {

namespace {

using Details = std::vector<std::string>;

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

bool within_rel(double value, double target, double rel) { return std::abs(value - target) <= rel * std::abs(target); }

// Random 3-SAT with m uniform in [n, 10n]: roughly 40% insoluble, the rest split
// between single- and multi-solution instances for n in 3..8.
CnfInstance seeded_instance(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> clause_count(n, 10 * n);
  return random_instance(n, clause_count(rng), rng);
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const {
    return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
  }
};

Csv parse_csv(const std::string& text) {
  Csv csv;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  {
    std::istringstream h(line);
    std::string cell;
    while (std::getline(h, cell, ',')) csv.header.push_back(cell);
  }
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream r(line);
    std::string cell;
    while (std::getline(r, cell, ',')) row.push_back(std::stod(cell));
    csv.rows.push_back(std::move(row));
  }
  return csv;
}

// A1: x^2 coefficients of the exact a/b levels from a quadratic fit over |x| <= 0.01.
bool perturbation_coefficients(Details& d) {
  const auto diag = worst_case_diagonal(7, 127);
  const auto fit = fit_level_coefficients(diag, -1.0, Variant::Unscaled, 0.01, 41);
  const bool a_ok = within_rel(fit.a_coeff, -2.0, 0.02);
  const bool b_ok = within_rel(fit.b_coeff, -252.0, 0.02);
  d.push_back("quadratic fit, 41 points on [-0.01, 0.01]: E_a x^2 coeff " + fmt(fit.a_coeff) + " (target -2 +/- 2%) " +
              (a_ok ? "ok" : "out of tolerance"));
  d.push_back("E_b x^2 coeff " + fmt(fit.b_coeff) + " (target -252 +/- 2%) " + (b_ok ? "ok" : "out of tolerance"));
  const auto quartic = fit_level_coefficients(diag, -1.0, Variant::Unscaled, 0.01, 41, 4);
  d.push_back("diagnostic only, fit with an x^4 term: E_a " + fmt(quartic.a_coeff) + ", E_b " + fmt(quartic.b_coeff));
  const auto p = second_order(diag, -1.0, Variant::Unscaled);
  d.push_back("second-order sum: E_a " + fmt(p.delta_a2_coeff) + ", E_b " + fmt(p.delta_b2_coeff));
  return a_ok && b_ok;
}

// A2: numeric gap location on the z = -1 edge against the second-order intersection.
bool gap_location(Details& d) {
  const auto diag = worst_case_diagonal(7, 127);
  const auto m = min_gap_on_segment(diag, Variant::Unscaled, {SweepAxis::X, -1.0, 0.0, 0.2, 201});
  const double x = std::abs(m.location.x);
  const double predicted = *second_order(diag, -1.0, Variant::Unscaled).x_gap_predicted;
  const bool in_window = x >= 0.040 && x <= 0.050;
  const bool near_prediction = std::abs(x - predicted) <= 0.01;
  d.push_back("numeric minimum |x| = " + fmt(x) + ", gap " + fmt(m.gap) + "; window [0.040, 0.050] " +
              (in_window ? "ok" : "missed"));
  d.push_back("second-order prediction " + fmt(predicted) + ", |difference| = " + fmt(std::abs(x - predicted)) +
              " (limit 0.01) " + (near_prediction ? "ok" : "exceeded"));
  return in_window && near_prediction;
}

// A3: z-scaled gap size/location and x-scaled coefficient stability for n = 3..9.
bool scaling_law(Details& d) {
  bool z_ok = true;
  std::vector<double> b_coeffs;
  for (int n = 3; n <= 9; ++n) {
    const auto diag = worst_case_diagonal(n, (1u << n) - 1);
    const auto m = min_gap_on_segment(diag, Variant::ZScaled, {SweepAxis::X, -1.0, -0.5, 0.5, 101});
    const bool ok = std::abs(m.gap - 0.5) <= 0.05 && std::abs(m.location.x) <= 0.01;
    z_ok = z_ok && ok;
    const auto fit = fit_level_coefficients(diag, -1.0, Variant::XScaled, 0.01, 41);
    b_coeffs.push_back(std::abs(fit.b_coeff));
    d.push_back("n=" + std::to_string(n) + ": z_scaled gap " + fmt(m.gap) + " at x=" + fmt(m.location.x) +
                (ok ? "" : " (out of tolerance)") + "; x_scaled |E_b coeff| " + fmt(std::abs(fit.b_coeff)));
  }
  const auto [lo, hi] = std::minmax_element(b_coeffs.begin(), b_coeffs.end());
  const double spread = (*hi - *lo) / *hi;
  const bool x_ok = spread < 0.10;
  d.push_back(std::string("z_scaled: gap 0.5 +/- 0.05 at |x| <= 0.01 for all n ") + (z_ok ? "ok" : "FAILED"));
  d.push_back("x_scaled: |E_b coeff| spread (max-min)/max = " + fmt(spread) + " (limit 0.10) " +
              (x_ok ? "ok" : "FAILED"));
  return z_ok && x_ok;
}

// Unscaled minimum gap on the z = -1 edge shrinks with n, roughly exponentially.
bool unscaled_gap_decay(Details& d) {
  std::vector<double> unscaled_gaps;
  for (int n = 3; n <= 9; ++n) {
    const auto diag = worst_case_diagonal(n, (1u << n) - 1);
    const auto u = min_gap_on_segment(diag, Variant::Unscaled, {SweepAxis::X, -1.0, 0.0, 0.5, 501});
    unscaled_gaps.push_back(u.gap);
    d.push_back("n=" + std::to_string(n) + ": min gap " + fmt(u.gap) + " at x=" + fmt(u.location.x));
  }
  // Log-linear fit of the unscaled minimum gap against n.
  bool monotone = true;
  for (std::size_t k = 1; k < unscaled_gaps.size(); ++k) monotone = monotone && unscaled_gaps[k] < unscaled_gaps[k - 1];
  const double count = static_cast<double>(unscaled_gaps.size());
  double sn = 0, sl = 0, snn = 0, snl = 0;
  for (std::size_t k = 0; k < unscaled_gaps.size(); ++k) {
    const double n = 3.0 + static_cast<double>(k);
    const double l = std::log(unscaled_gaps[k]);
    sn += n;
    sl += l;
    snn += n * n;
    snl += n * l;
  }
  const double slope = (count * snl - sn * sl) / (count * snn - sn * sn);
  const bool decay_ok = monotone && slope < 0.0;
  d.push_back("unscaled min gap monotone decreasing " + std::string(monotone ? "yes" : "no") +
              ", log-linear slope " + fmt(slope) + (decay_ok ? " ok" : " FAILED"));
  return decay_ok;
}

// A4: Berry-phase solubility against brute force on seeded random instances.
bool phase_solubility(Details& d) {
  int total_runs = 0;
  int degenerate = 0;
  int disagreements = 0;
  for (int n = 3; n <= 8; ++n) {
    std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(n));
    int insoluble = 0, single = 0, multi = 0, agree = 0;
    for (int t = 0; t < 100; ++t) {
      const auto diag = violation_diagonal(seeded_instance(n, rng));
      const auto truth = brute_force_solubility(diag);
      (truth.soluble ? (truth.solutions.size() == 1 ? single : multi) : insoluble)++;
      ++total_runs;
      try {
        if (solubility(diag, Variant::Unscaled) == truth.soluble) {
          ++agree;
        } else {
          ++disagreements;
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateOnLoop) throw;
        ++degenerate;
        d.push_back("DegenerateOnLoop n=" + std::to_string(n) + " instance " + std::to_string(t) + ": " + e.what());
      }
    }
    d.push_back("n=" + std::to_string(n) + ": " + std::to_string(agree) + "/100 agree (insoluble " +
                std::to_string(insoluble) + ", single " + std::to_string(single) + ", multi " + std::to_string(multi) + ")");
  }
  const double degenerate_rate = static_cast<double>(degenerate) / total_runs;
  d.push_back("disagreements " + std::to_string(disagreements) + ", DegenerateOnLoop rate " + fmt(degenerate_rate));
  return disagreements == 0 && degenerate_rate < 0.05;
}

bool check_search(const SolubilityOracle& oracle, const std::string& name, double limit, Details& d) {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  int soluble_runs = 0;
  int insoluble_runs = 0;
  for (int n = 3; n <= 7; ++n) {
    std::mt19937_64 rng(5000 + static_cast<std::uint64_t>(n));
    int found = 0;
    int insoluble_here = 0;
    while (found < 50) {
      const auto diag = violation_diagonal(seeded_instance(n, rng));
      const bool soluble = diag.soluble();
      if (!soluble && insoluble_here >= 10) continue;
      const auto trace = solve(diag, oracle);
      if (soluble) {
        ++found;
        ++soluble_runs;
        const bool good = trace.result && diag[*trace.result] == 0 && trace.half_space_calls == n &&
                          trace.oracle_calls == n + 1;
        if (!good) {
          ok = false;
          d.push_back(name + ": soluble n=" + std::to_string(n) + " run failed");
        }
      } else {
        ++insoluble_here;
        ++insoluble_runs;
        if (trace.result || trace.oracle_calls != 1) {
          ok = false;
          d.push_back(name + ": insoluble n=" + std::to_string(n) + " run failed");
        }
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool fast = secs < limit;
  d.push_back(name + " oracle: " + std::to_string(soluble_runs) + " soluble runs with n half-space calls, " +
              std::to_string(insoluble_runs) + " insoluble runs with 1 call; " + fmt(secs) + " s (limit " +
              fmt(limit) + " s)" + (ok && fast ? " ok" : " FAILED"));
  return ok && fast;
}

// A5: bisection search with both oracles.
bool search(Details& d) {
  const bool berry = check_search(berry_oracle(Variant::Unscaled), "berry", 600.0, d);
  const bool brute = check_search(brute_oracle(), "brute", 10.0, d);
  return berry && brute;
}

// A6: arrowhead solver against dense diagonalization.
bool eigensolver_equivalence(Details& d) {
  std::mt19937_64 rng(6006);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst = 0.0;
  int invariant_failures = 0;
  for (std::size_t dim : {9u, 65u, 129u, 1025u}) {
    for (int t = 0; t < 50; ++t) {
      std::vector<double> body(dim - 1);
      for (auto& v : body) v = u(rng);
      const ArrowheadHamiltonian h(std::move(body), u(rng), u(rng));
      const auto fast = eigen_arrowhead(h, true);
      const auto dense = eigen_dense(h, false);
      for (std::size_t k = 0; k < fast.eigenvalues.size(); ++k) {
        worst = std::max(worst, std::abs(fast.eigenvalues[k] - dense.eigenvalues[k]));
      }
      const double trace = std::accumulate(h.body_diag().begin(), h.body_diag().end(), h.head_diag());
      const double sum = std::accumulate(fast.eigenvalues.begin(), fast.eigenvalues.end(), 0.0);
      const bool trace_ok = std::abs(sum - trace) <= 1e-9 * std::max(1.0, std::abs(trace));
      const bool residual_ok = ground_residual(h, fast) <= 1e-10 * (1.0 + std::abs(fast.ground_energy()));
      if (!interlaces(h, fast) || !trace_ok || !residual_ok) ++invariant_failures;
    }
  }
  d.push_back("200 matrices, dims {9, 65, 129, 1025}: max |arrowhead - dense| = " + fmt(worst) + " (limit 1e-10)");
  d.push_back("interlacing/trace/residual failures: " + std::to_string(invariant_failures));
  return worst <= 1e-10 && invariant_failures == 0;
}

// A7: adiabatic transport dynamics.
bool adiabatic_dynamics(Details& d) {
  const auto diag = worst_case_diagonal(3, 7);
  const auto path = LoopPath::default_rectangle();
  const auto slow = evolve(diag, Variant::Unscaled, path, {1e4, SpeedProfile::GapAdaptive, 20000, 0.05});
  const double phase_err = std::abs(wrap_phase(slow.geometric_phase_estimate - std::numbers::pi));
  const bool slow_ok = slow.ground_fidelity >= 0.99 && phase_err <= 0.15;
  d.push_back("gap_adaptive T=1e4: fidelity " + fmt(slow.ground_fidelity) + ", geometric phase " +
              fmt(slow.geometric_phase_estimate) + " (|phase - pi| = " + fmt(phase_err) + ")" +
              (slow_ok ? " ok" : " FAILED"));
  const auto fast = evolve(diag, Variant::Unscaled, path, {10.0, SpeedProfile::Uniform, 20000, 0.05});
  const bool fast_ok = fast.ground_fidelity < slow.ground_fidelity;
  d.push_back("uniform T=10: fidelity " + fmt(fast.ground_fidelity) + (fast_ok ? " < slow run ok" : " FAILED"));
  bool monotone = true;
  for (auto profile : {SpeedProfile::GapAdaptive, SpeedProfile::Uniform}) {
    const auto rows = fidelity_vs_time(diag, Variant::Unscaled, path, {10, 100, 1000, 10000}, {1, profile, 20000, 0.05});
    std::string line = std::string(to_string(profile)) + " fidelity vs T:";
    for (std::size_t k = 0; k < rows.size(); ++k) {
      line += " " + fmt(rows[k].ground_fidelity);
      if (k > 0 && rows[k].ground_fidelity < rows[k - 1].ground_fidelity - 0.02) monotone = false;
    }
    d.push_back(line);
  }
  d.push_back(std::string("non-decreasing within 0.02: ") + (monotone ? "ok" : "FAILED"));
  return slow_ok && fast_ok && monotone;
}

// A8: qualitative structure of the spectrum sweeps, checked on the CSV text.
bool sweep_structure(Details& d) {
  const auto diag = worst_case_diagonal(7, 127);
  std::ostringstream crossing_text;
  write_sweep_csv(crossing_text, diag, Variant::Unscaled, {SweepAxis::Z, 0.0, -1.0, 1.0, 201}, 0);
  const auto crossing = parse_csv(crossing_text.str());
  bool crossing_ok = crossing.header.size() == 2 + 129 + 1;
  const auto e0 = crossing.column("e0"), e1 = crossing.column("e1"), zc = crossing.column("z"),
             g = crossing.column("gap01");
  double gap_at_zero = -1.0;
  for (const auto& row : crossing.rows) {
    const double z = row[zc];
    // Ground is z/4 (solution level) below zero and -z/4 (head) above.
    crossing_ok = crossing_ok && row[e0] == -std::abs(z) / 4.0 && row[e1] == std::abs(z) / 4.0;
    if (z == 0.0) gap_at_zero = row[g];
  }
  crossing_ok = crossing_ok && gap_at_zero == 0.0;
  d.push_back(std::string("x=0 sweep: e0/e1 cross at z=0 (gap ") + fmt(gap_at_zero) + ") " +
              (crossing_ok ? "ok" : "FAILED"));

  std::ostringstream avoided_text;
  write_sweep_csv(avoided_text, diag, Variant::Unscaled, {SweepAxis::X, -1.0, -0.2, 0.2, 401}, 2);
  const auto avoided = parse_csv(avoided_text.str());
  const auto ax = avoided.column("x"), ag = avoided.column("gap01");
  const auto best = std::min_element(avoided.rows.begin(), avoided.rows.end(),
                                     [&](const auto& a, const auto& b) { return a[ag] < b[ag]; });
  double gap_at_origin = 0.0;
  for (const auto& row : avoided.rows) {
    if (row[ax] == 0.0) gap_at_origin = row[ag];
  }
  const bool avoided_ok = (*best)[ag] > 0.0 && (*best)[ax] != 0.0 && (*best)[ag] < gap_at_origin;
  d.push_back("z=-1 sweep: avoided crossing, min gap " + fmt((*best)[ag]) + " at x=" + fmt((*best)[ax]) +
              " (gap at x=0: " + fmt(gap_at_origin) + ") " + (avoided_ok ? "ok" : "FAILED"));

  std::ostringstream scaled_text;
  write_sweep_csv(scaled_text, diag, Variant::ZScaled, {SweepAxis::X, -1.0, -1.0, 1.0, 201}, 0);
  const auto scaled = parse_csv(scaled_text.str());
  bool band_ok = true;
  double coupled_max = 0.0;
  for (const auto& row : scaled.rows) {
    std::map<double, int> counts;
    for (int level = 2; level <= 128; ++level) ++counts[row[scaled.column("e" + std::to_string(level))]];
    const auto cluster = std::max_element(counts.begin(), counts.end(),
                                          [](const auto& a, const auto& b) { return a.second < b.second; });
    band_ok = band_ok && cluster->second >= 126 && cluster->first >= 127.5 && cluster->first <= 128.5;
    coupled_max = std::max(coupled_max, row[scaled.column("e128")]);
  }
  d.push_back(std::string("z_scaled n=7: >= 126 exactly degenerate upper levels inside [127.5, 128.5] ") +
              (band_ok ? "ok" : "FAILED"));
  d.push_back("the single coupled upper level reaches " + fmt(coupled_max) + " at |x| = 1");
  return crossing_ok && avoided_ok && band_ok;
}

struct Criterion {
  std::string id;
  std::string title;
  double time_limit;
  std::function<bool(Details&)> check;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"A1", "perturbation coefficients -2 and -252 from exact levels", 5.0, perturbation_coefficients},
      {"A2", "gap location near x = 0.045 on the z = -1 edge", 10.0, gap_location},
      {"A3", "scaling law: constant gap for z_scaled, stable x_scaled coefficient", 60.0, scaling_law},
      {"N1", "unscaled minimum gap decreases monotonically with n", 60.0, unscaled_gap_decay},
      {"A4", "phase-solubility equivalence on random 3-SAT, n = 3..8", 600.0, phase_solubility},
      {"A5", "bisection search in n half-space calls", 610.0, search},
      {"A6", "arrowhead vs dense eigensolver on 200 random matrices", 60.0, eigensolver_equivalence},
      {"A7", "adiabatic dynamics: slow loop keeps the ground state and picks up pi", 120.0, adiabatic_dynamics},
      {"A8", "spectrum sweeps reproduce the crossing, avoided crossing and scaled band", 60.0, sweep_structure},
  };
  return all;
}

}  // namespace

std::vector<CriterionInfo> list() {
  std::vector<CriterionInfo> out;
  for (const auto& c : criteria()) out.push_back({c.id, c.title});
  return out;
}

std::vector<CriterionResult> run(std::ostream& out, const std::vector<std::string>& only) {
  std::vector<CriterionResult> results;
  for (const auto& c : criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    CriterionResult r{c.id, c.title, false, 0.0, c.time_limit, {}};
    const auto start = std::chrono::steady_clock::now();
    try {
      r.passed = c.check(r.details);
    } catch (const std::exception& e) {
      r.details.push_back(std::string("exception: ") + e.what());
      r.passed = false;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.seconds >= c.time_limit) {
      r.details.push_back("runtime " + fmt(r.seconds) + " s exceeds " + fmt(c.time_limit) + " s");
      r.passed = false;
    }
    out << (r.passed ? "PASS " : "FAIL ") << r.id << "  " << r.title << "  [" << fmt(r.seconds) << " s]\n";
    for (const auto& line : r.details) out << "       " << line << '\n';
    out.flush();
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace diaboli::acceptance
