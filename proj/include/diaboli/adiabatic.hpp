#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "diaboli/holonomy.hpp"

namespace diaboli {

enum class SpeedProfile { Uniform, GapAdaptive };

SpeedProfile parse_profile(std::string_view name);
std::string_view to_string(SpeedProfile p);

/// Traversal of a loop in time. GapAdaptive moves with speed proportional to the
/// squared coupled-sector gap, clamped below at min_speed_fraction of the mean.
struct Schedule {
  double total_time = 1.0;
  SpeedProfile profile = SpeedProfile::Uniform;
  int steps = 20000;
  double min_speed_fraction = 0.05;
};

struct EvolutionRow {
  double t = 0.0;
  ParameterPoint point;
  double e0 = 0.0;
  double e1 = 0.0;
  double fidelity = 1.0;
  double norm = 1.0;
};

struct EvolutionResult {
  Eigen::VectorXcd final_state;
  double ground_fidelity = 0.0;
  double dynamical_phase = 0.0;
  double total_phase = 0.0;
  double geometric_phase_estimate = 0.0;  // in (-pi, pi]
  double max_norm_deviation = 0.0;
  std::vector<EvolutionRow> rows;         // filled only when requested
};

/// Maps the time fraction t/T in [0, 1] to the arc-length fraction s in [0, 1].
class TimeMap {
 public:
  TimeMap(const ViolationDiagonal& diag, Variant variant, const LoopPath& path, const Schedule& schedule);
  double arc_fraction(double time_fraction) const;

 private:
  std::vector<double> s_grid_;
  std::vector<double> t_grid_;  // normalized cumulative time, t_grid_.back() == 1
};

/// Point on the loop at arc-length fraction s.
ParameterPoint point_at_arc(const LoopPath& path, double s);

/// exp(-i H dt) psi, exact through the arrowhead eigendecomposition.
Eigen::VectorXcd propagate(const ArrowheadHamiltonian& h, const Eigen::VectorXcd& psi, double dt);

EvolutionResult evolve(const ViolationDiagonal& diag, Variant variant, const LoopPath& path,
                       const Schedule& schedule, bool record_rows = false);

struct FidelityRow {
  double total_time = 0.0;
  double ground_fidelity = 0.0;
  double geometric_phase_estimate = 0.0;
  double dynamical_phase = 0.0;
  double max_norm_deviation = 0.0;
};

std::vector<FidelityRow> fidelity_vs_time(const ViolationDiagonal& diag, Variant variant, const LoopPath& path,
                                          const std::vector<double>& times, Schedule base);

void write_evolution_csv(std::ostream& out, const EvolutionResult& result);
nlohmann::json to_json(const EvolutionResult& result, const Schedule& schedule);

/// Wraps an angle into (-pi, pi].
double wrap_phase(double angle);

}  // namespace diaboli
