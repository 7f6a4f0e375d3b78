#include "diaboli/adiabatic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "diaboli/error.hpp"
#include "diaboli/format.hpp"

namespace diaboli {

namespace {

constexpr int kGapGridPoints = 4096;
constexpr double kNormTolerance = 1e-6;

void validate(const Schedule& s) {
  if (!(s.total_time > 0.0) || !std::isfinite(s.total_time)) {
    throw Error(ErrorKind::ScheduleInvalid, "total_time must be positive and finite");
  }
  if (s.steps < 100) throw Error(ErrorKind::ScheduleInvalid, "at least 100 steps are required");
  if (!(s.min_speed_fraction > 0.0 && s.min_speed_fraction <= 1.0)) {
    throw Error(ErrorKind::ScheduleInvalid, "min_speed_fraction must be in (0, 1]");
  }
}

}  // namespace

SpeedProfile parse_profile(std::string_view name) {
  if (name == "uniform") return SpeedProfile::Uniform;
  if (name == "adaptive" || name == "gap_adaptive") return SpeedProfile::GapAdaptive;
  throw Error(ErrorKind::ScheduleInvalid, "unknown speed profile '" + std::string(name) + "'");
}

std::string_view to_string(SpeedProfile p) {
  return p == SpeedProfile::Uniform ? "uniform" : "gap_adaptive";
}

double wrap_phase(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(angle, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  if (r > std::numbers::pi) r -= two_pi;
  return r;
}

ParameterPoint point_at_arc(const LoopPath& path, double s) {
  const double target = std::clamp(s, 0.0, 1.0) * path.length();
  double walked = 0.0;
  for (std::size_t e = 0; e < path.edge_count(); ++e) {
    const double len = path.edge_length(e);
    if (target <= walked + len || e + 1 == path.edge_count()) {
      return path.at(e, len > 0.0 ? std::clamp((target - walked) / len, 0.0, 1.0) : 0.0);
    }
    walked += len;
  }
  return path.waypoints().back();
}

TimeMap::TimeMap(const ViolationDiagonal& diag, Variant variant, const LoopPath& path, const Schedule& schedule) {
  validate(schedule);
  s_grid_.resize(kGapGridPoints);
  for (int k = 0; k < kGapGridPoints; ++k) s_grid_[k] = static_cast<double>(k) / (kGapGridPoints - 1);
  t_grid_.assign(kGapGridPoints, 0.0);
  if (schedule.profile == SpeedProfile::Uniform) {
    t_grid_ = s_grid_;
    return;
  }
  std::vector<double> speed(kGapGridPoints);
  parallel_for(speed.size(), [&](std::size_t k) {
    const double g = eigen_arrowhead(build(diag, point_at_arc(path, s_grid_[k]), variant), false).coupled_gap();
    speed[k] = g * g;
  });
  double mean = 0.0;
  for (double v : speed) mean += v;
  mean /= static_cast<double>(speed.size());
  const double floor = schedule.min_speed_fraction * mean;
  for (auto& v : speed) v = std::max(v, floor);
  // t(s) = integral of ds / v, trapezoidal, then normalized.
  for (int k = 1; k < kGapGridPoints; ++k) {
    const double ds = s_grid_[k] - s_grid_[k - 1];
    t_grid_[k] = t_grid_[k - 1] + 0.5 * ds * (1.0 / speed[k] + 1.0 / speed[k - 1]);
  }
  const double total = t_grid_.back();
  for (auto& t : t_grid_) t /= total;
}

double TimeMap::arc_fraction(double time_fraction) const {
  const double tf = std::clamp(time_fraction, 0.0, 1.0);
  const auto it = std::upper_bound(t_grid_.begin(), t_grid_.end(), tf);
  if (it == t_grid_.end()) return 1.0;
  const auto k = static_cast<std::size_t>(it - t_grid_.begin());
  if (k == 0) return 0.0;
  const double t0 = t_grid_[k - 1];
  const double t1 = t_grid_[k];
  const double w = t1 > t0 ? (tf - t0) / (t1 - t0) : 0.0;
  return s_grid_[k - 1] + w * (s_grid_[k] - s_grid_[k - 1]);
}

Eigen::VectorXcd propagate(const ArrowheadHamiltonian& h, const Eigen::VectorXcd& psi, double dt) {
  using cplx = std::complex<double>;
  const auto dec = decompose_coupled(h);
  const auto& g = dec.groups;
  const std::size_t N = h.body_size();
  const auto J = static_cast<Eigen::Index>(g.levels.size());

  // Coupled coordinates: normalized group sums plus the head.
  Eigen::VectorXcd coupled = Eigen::VectorXcd::Zero(J + 1);
  for (std::size_t i = 0; i < N; ++i) coupled[static_cast<Eigen::Index>(g.group_of[i])] += psi[static_cast<Eigen::Index>(i)];
  std::vector<double> inv_sqrt_k(g.levels.size());
  for (std::size_t j = 0; j < g.levels.size(); ++j) {
    inv_sqrt_k[j] = 1.0 / std::sqrt(static_cast<double>(g.multiplicity[j]));
    coupled[static_cast<Eigen::Index>(j)] *= inv_sqrt_k[j];
  }
  coupled[J] = psi[static_cast<Eigen::Index>(N)];

  Eigen::VectorXcd phases(J + 1);
  for (Eigen::Index r = 0; r <= J; ++r) phases[r] = std::polar(1.0, -dec.eigenvalues[static_cast<std::size_t>(r)] * dt);
  const Eigen::MatrixXcd V = dec.vectors.cast<cplx>();
  const Eigen::VectorXcd evolved = V * phases.cwiseProduct(V.transpose() * coupled);

  std::vector<cplx> level_phase(g.levels.size());
  for (std::size_t j = 0; j < g.levels.size(); ++j) level_phase[j] = std::polar(1.0, -g.levels[j] * dt);

  Eigen::VectorXcd out(psi.size());
  for (std::size_t i = 0; i < N; ++i) {
    const std::size_t j = g.group_of[i];
    const auto idx = static_cast<Eigen::Index>(i);
    const cplx along = coupled[static_cast<Eigen::Index>(j)] * inv_sqrt_k[j];
    // Component orthogonal to the group sum: decoupled, energy = level.
    const cplx transverse = psi[idx] - along;
    out[idx] = transverse * level_phase[j] + evolved[static_cast<Eigen::Index>(j)] * inv_sqrt_k[j];
  }
  out[static_cast<Eigen::Index>(N)] = evolved[J];
  return out;
}

EvolutionResult evolve(const ViolationDiagonal& diag, Variant variant, const LoopPath& path,
                       const Schedule& schedule, bool record_rows) {
  validate(schedule);
  const TimeMap time_map(diag, variant, path, schedule);
  const double dt = schedule.total_time / schedule.steps;

  auto point_at_time = [&](double t) { return point_at_arc(path, time_map.arc_fraction(t / schedule.total_time)); };

  const auto first = eigen_arrowhead(build(diag, path.waypoints().front(), variant), true);
  const Eigen::VectorXcd initial = first.ground_vector->cast<std::complex<double>>();
  Eigen::VectorXcd psi = initial;

  EvolutionResult result;
  double energy_integral = 0.0;
  double previous_e0 = first.ground_energy();
  double fidelity = 1.0;
  if (record_rows) {
    result.rows.push_back({0.0, path.waypoints().front(), first.coupled_eigenvalues[0], first.coupled_eigenvalues[1],
                           1.0, 1.0});
  }
  for (int k = 0; k < schedule.steps; ++k) {
    const double t0 = k * dt;
    const double t1 = (k + 1 == schedule.steps) ? schedule.total_time : (k + 1) * dt;
    const auto mid = point_at_time(0.5 * (t0 + t1));
    psi = propagate(build(diag, mid, variant), psi, t1 - t0);

    const double norm = psi.norm();
    const double deviation = std::abs(norm - 1.0);
    result.max_norm_deviation = std::max(result.max_norm_deviation, deviation);
    if (deviation > kNormTolerance) {
      throw Error(ErrorKind::NormDrift, "norm " + format_double(norm) + " at step " + std::to_string(k + 1));
    }

    const auto here = k + 1 == schedule.steps ? path.waypoints().back() : point_at_time(t1);
    const auto s = eigen_arrowhead(build(diag, here, variant), true);
    energy_integral += 0.5 * (t1 - t0) * (previous_e0 + s.ground_energy());
    previous_e0 = s.ground_energy();
    fidelity = std::norm(s.ground_vector->cast<std::complex<double>>().dot(psi));
    if (record_rows) {
      result.rows.push_back({t1, here, s.coupled_eigenvalues[0], s.coupled_eigenvalues[1], fidelity, norm});
    }
  }
  result.final_state = psi;
  result.ground_fidelity = std::clamp(fidelity, 0.0, 1.0);
  result.dynamical_phase = -energy_integral;
  result.total_phase = std::arg(initial.dot(psi));
  result.geometric_phase_estimate = wrap_phase(result.total_phase - result.dynamical_phase);
  return result;
}

std::vector<FidelityRow> fidelity_vs_time(const ViolationDiagonal& diag, Variant variant, const LoopPath& path,
                                          const std::vector<double>& times, Schedule base) {
  if (times.empty()) throw Error(ErrorKind::ScheduleInvalid, "no total times given");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || (i > 0 && !(times[i] > times[i - 1]))) {
      throw Error(ErrorKind::ScheduleInvalid, "total times must be positive and ascending");
    }
  }
  std::vector<FidelityRow> rows(times.size());
  parallel_for(times.size(), [&](std::size_t i) {
    Schedule s = base;
    s.total_time = times[i];
    const auto r = evolve(diag, variant, path, s);
    rows[i] = {times[i], r.ground_fidelity, r.geometric_phase_estimate, r.dynamical_phase, r.max_norm_deviation};
  });
  return rows;
}

void write_evolution_csv(std::ostream& out, const EvolutionResult& result) {
  out << "t,x,z,e0,e1,fidelity,norm\n";
  for (const auto& r : result.rows) {
    out << format_double(r.t) << ',' << format_double(r.point.x) << ',' << format_double(r.point.z) << ','
        << format_double(r.e0) << ',' << format_double(r.e1) << ',' << format_double(r.fidelity) << ','
        << format_double(r.norm) << '\n';
  }
}

nlohmann::json to_json(const EvolutionResult& result, const Schedule& schedule) {
  nlohmann::json j;
  j["total_time"] = schedule.total_time;
  j["profile"] = std::string(to_string(schedule.profile));
  j["steps"] = schedule.steps;
  j["ground_fidelity"] = result.ground_fidelity;
  j["dynamical_phase"] = result.dynamical_phase;
  j["total_phase"] = result.total_phase;
  j["geometric_phase_estimate"] = result.geometric_phase_estimate;
  j["max_norm_deviation"] = result.max_norm_deviation;
  return j;
}

}  // namespace diaboli
