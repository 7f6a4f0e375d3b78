#include "diaboli/perturbation.hpp"

#include <algorithm>
#include <cmath>

#include "diaboli/error.hpp"

namespace diaboli {

namespace {

struct Unperturbed {
  double energy_scale;
  double coupling_sq;  // |H'|^2 / x^2
};

Unperturbed unperturbed_factors(std::size_t n_states, Variant variant) {
  const double n = static_cast<double>(n_states);
  switch (variant) {
    case Variant::Unscaled: return {1.0, 1.0};
    case Variant::ZScaled: return {n, 1.0};
    case Variant::XScaled: return {1.0, 1.0 / n};
  }
  throw Error(ErrorKind::UnknownVariant, std::to_string(static_cast<int>(variant)));
}

}  // namespace

GapPrediction second_order(const ViolationDiagonal& diag, double z, Variant variant) {
  if (!std::isfinite(z)) throw Error(ErrorKind::InvalidArgument, "z must be finite");
  const auto [scale, coupling_sq] = unperturbed_factors(diag.size(), variant);
  const int lowest = *std::min_element(diag.entries().begin(), diag.entries().end());
  const auto degeneracy = std::count(diag.entries().begin(), diag.entries().end(), lowest);

  GapPrediction p;
  p.z = z;
  p.variant = variant;
  p.e_b0 = -z / 4.0;
  p.e_a0 = z / 4.0 + scale * lowest;

  // Head state: one term per body state.
  double b_sum = 0.0;
  for (int h : diag.entries()) {
    const double denom = p.e_b0 - (z / 4.0 + scale * h);
    if (denom == 0.0) {
      throw Error(ErrorKind::DegenerateUnperturbed, "body level degenerate with the head at z = " + std::to_string(z));
    }
    b_sum += coupling_sq / denom;
  }
  // The a level couples only to the head. A degenerate lowest group couples
  // through its symmetric combination, whose squared coupling is k x^2.
  p.delta_a2_coeff = static_cast<double>(degeneracy) * coupling_sq / (p.e_a0 - p.e_b0);
  p.delta_b2_coeff = b_sum;

  const double x_sq = (p.e_b0 - p.e_a0) / (p.delta_a2_coeff - p.delta_b2_coeff);
  if (std::isfinite(x_sq) && x_sq >= 0.0) p.x_gap_predicted = std::sqrt(x_sq);
  return p;
}

ClosedForm worst_case_closed_form(double n_states, double z, Variant variant) {
  switch (variant) {
    case Variant::Unscaled:
      return {2.0 / z, -2.0 * (n_states - 1.0) / (2.0 + z) - 2.0 / z};
    case Variant::ZScaled:
      return {2.0 / z, -(n_states - 1.0) / (n_states + z / 2.0) - 2.0 / z};
    case Variant::XScaled:
      return {2.0 / (z * n_states), (-2.0 * (n_states - 1.0) / (2.0 + z) - 2.0 / z) / n_states};
  }
  throw Error(ErrorKind::UnknownVariant, std::to_string(static_cast<int>(variant)));
}

PredictionError prediction_error(const ViolationDiagonal& diag, double z, Variant variant, double x_max,
                                 int samples) {
  PredictionError r;
  r.prediction = second_order(diag, z, variant);
  const auto m = min_gap_on_segment(diag, variant, {SweepAxis::X, z, 0.0, x_max, samples});
  r.x_gap_numeric = m.location.x;
  r.gap_numeric = m.gap;
  if (r.prediction.x_gap_predicted) r.abs_error = std::abs(*r.prediction.x_gap_predicted - r.x_gap_numeric);
  return r;
}

nlohmann::json to_json(const PredictionError& report) {
  const auto& p = report.prediction;
  nlohmann::json j;
  j["z"] = p.z;
  j["variant"] = std::string(to_string(p.variant));
  j["delta_a2_coeff"] = p.delta_a2_coeff;
  j["delta_b2_coeff"] = p.delta_b2_coeff;
  j["x_gap_predicted"] = p.x_gap_predicted ? nlohmann::json(*p.x_gap_predicted) : nlohmann::json(nullptr);
  j["x_gap_numeric"] = report.x_gap_numeric;
  j["gap_numeric"] = report.gap_numeric;
  j["abs_error"] = report.abs_error ? nlohmann::json(*report.abs_error) : nlohmann::json(nullptr);
  return j;
}

std::pair<double, double> exact_ab_levels(const ViolationDiagonal& diag, double x, double z, Variant variant) {
  const auto s = eigen_arrowhead(build(diag, {x, z}, variant), false);
  const auto p = second_order(diag, z, variant);
  const double lo = s.coupled_eigenvalues[0];
  const double hi = s.coupled_eigenvalues[1];
  return p.e_a0 < p.e_b0 ? std::pair{lo, hi} : std::pair{hi, lo};
}

LevelFit fit_level_coefficients(const ViolationDiagonal& diag, double z, Variant variant, double x_max,
                                int samples, int degree) {
  if (samples < degree + 1 || !(x_max > 0.0)) throw Error(ErrorKind::InvalidArgument, "fit needs more samples");
  if (degree != 2 && degree != 4) throw Error(ErrorKind::InvalidArgument, "fit degree must be 2 or 4");
  const auto rows = static_cast<Eigen::Index>(samples);
  Eigen::MatrixXd design(rows, degree + 1);
  Eigen::VectorXd ea(rows);
  Eigen::VectorXd eb(rows);
  for (Eigen::Index k = 0; k < rows; ++k) {
    const double x = -x_max + 2.0 * x_max * static_cast<double>(k) / static_cast<double>(samples - 1);
    for (int c = 0; c <= degree; ++c) design(k, c) = std::pow(x, c);
    std::tie(ea[k], eb[k]) = exact_ab_levels(diag, x, z, variant);
  }
  const auto qr = design.colPivHouseholderQr();
  return {qr.solve(ea)[2], qr.solve(eb)[2]};
}

}  // namespace diaboli
