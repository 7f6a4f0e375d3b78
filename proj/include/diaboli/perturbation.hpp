#pragma once

#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "diaboli/eigensolver.hpp"

namespace diaboli {

/// Second-order corrections in the border parameter x, for the lowest body
/// level ("a", the solution level when one exists) and the head state ("b").
/// Energies to second order: E_a = e_a0 + delta_a2_coeff x^2, E_b = e_b0 + delta_b2_coeff x^2.
struct GapPrediction {
  double z = 0.0;
  Variant variant = Variant::Unscaled;
  double delta_a2_coeff = 0.0;
  double delta_b2_coeff = 0.0;
  double e_a0 = 0.0;
  double e_b0 = 0.0;
  std::optional<double> x_gap_predicted;
};

GapPrediction second_order(const ViolationDiagonal& diag, double z, Variant variant);

struct ClosedForm {
  double delta_a2_coeff;
  double delta_b2_coeff;
};

/// Closed-form coefficients for the worst-case diagonal (one zero, N-1 ones).
ClosedForm worst_case_closed_form(double n_states, double z, Variant variant);

struct PredictionError {
  GapPrediction prediction;
  double x_gap_numeric = 0.0;
  double gap_numeric = 0.0;
  std::optional<double> abs_error;  // empty when no second-order intersection exists
};

/// Compares the predicted crossing with the numeric gap minimum over x in [0, x_max].
PredictionError prediction_error(const ViolationDiagonal& diag, double z, Variant variant, double x_max = 0.5,
                                 int samples = 501);

nlohmann::json to_json(const PredictionError& report);

/// x^2 coefficients of the exact a and b levels from a least-squares fit of
/// c0 + c1 x + c2 x^2 on `samples` evenly spaced points of [-x_max, x_max].
struct LevelFit {
  double a_coeff = 0.0;
  double b_coeff = 0.0;
};

LevelFit fit_level_coefficients(const ViolationDiagonal& diag, double z, Variant variant, double x_max,
                                int samples, int degree = 2);

/// Exact a and b levels (coupled-sector eigenvalues matched by unperturbed order).
std::pair<double, double> exact_ab_levels(const ViolationDiagonal& diag, double x, double z, Variant variant);

}  // namespace diaboli
