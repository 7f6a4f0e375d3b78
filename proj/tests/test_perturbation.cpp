#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "diaboli/error.hpp"
#include "diaboli/perturbation.hpp"

using namespace diaboli;

TEST_CASE("worst case n = 7, z = -1, unscaled") {
  const auto p = second_order(worst_case_diagonal(7, 127), -1.0, Variant::Unscaled);
  CHECK(p.delta_a2_coeff == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(p.delta_b2_coeff == doctest::Approx(-252.0).epsilon(1e-14));
  CHECK(p.e_a0 == -0.25);
  CHECK(p.e_b0 == 0.25);
  REQUIRE(p.x_gap_predicted);
  // 250 x^2 = 1/2
  CHECK(*p.x_gap_predicted == doctest::Approx(std::sqrt(1.0 / 500.0)).epsilon(1e-14));
  CHECK(p.delta_a2_coeff < 0.0);
  CHECK(p.delta_b2_coeff < p.delta_a2_coeff);
}

TEST_CASE("z-scaled parabolas do not intersect") {
  const auto p = second_order(worst_case_diagonal(7, 127), -1.0, Variant::ZScaled);
  CHECK(p.delta_a2_coeff == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(p.delta_b2_coeff == doctest::Approx(-127.0 / 127.5 + 2.0).epsilon(1e-14));
  CHECK_FALSE(p.x_gap_predicted.has_value());
}

TEST_CASE("general sum reduces to the closed form on worst-case input") {
  for (int n = 1; n <= 10; ++n) {
    const auto diag = worst_case_diagonal(n, 0);
    const double N = std::ldexp(1.0, n);
    for (double z : {-1.5, -1.0, -0.3, 0.4, 1.0, 3.0}) {
      for (auto v : {Variant::Unscaled, Variant::ZScaled, Variant::XScaled}) {
        if (v == Variant::ZScaled && z == -2.0 * N) continue;
        const auto p = second_order(diag, z, v);
        const auto c = worst_case_closed_form(N, z, v);
        CHECK(p.delta_a2_coeff == doctest::Approx(c.delta_a2_coeff).epsilon(1e-12));
        CHECK(p.delta_b2_coeff == doctest::Approx(c.delta_b2_coeff).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("vanishing denominators are reported") {
  for (double z : {0.0, -2.0}) {
    try {
      second_order(worst_case_diagonal(4, 2), z, Variant::Unscaled);
      FAIL("expected DegenerateUnperturbed");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DegenerateUnperturbed);
    }
  }
}

TEST_CASE("second order residual is O(x^4)") {
  const auto diag = worst_case_diagonal(7, 127);
  const auto p = second_order(diag, -1.0, Variant::Unscaled);
  auto residuals = [&](double x) {
    const auto [ea, eb] = exact_ab_levels(diag, x, -1.0, Variant::Unscaled);
    return std::pair{std::abs(ea - (p.e_a0 + p.delta_a2_coeff * x * x)),
                     std::abs(eb - (p.e_b0 + p.delta_b2_coeff * x * x))};
  };
  for (double x : {0.01, 0.005, 0.0025}) {
    const auto [ra, rb] = residuals(x);
    const auto [ra2, rb2] = residuals(x / 2);
    CHECK(ra / ra2 == doctest::Approx(16.0).epsilon(0.1));
    CHECK(rb / rb2 == doctest::Approx(16.0).epsilon(0.1));
  }
}

TEST_CASE("unscaled head coefficient grows linearly in N") {
  double previous = 0.0;
  for (int n = 3; n <= 12; ++n) {
    const double N = std::ldexp(1.0, n);
    const double b = second_order(worst_case_diagonal(n, 0), -1.0, Variant::Unscaled).delta_b2_coeff;
    CHECK(std::abs(b) == doctest::Approx(2.0 * (N - 1.0) - 2.0).epsilon(1e-12));
    CHECK(std::abs(b) > previous);
    previous = std::abs(b);
  }
}

TEST_CASE("z-scaled head coefficient approaches one monotonically") {
  double previous = 1e9;
  for (int n = 3; n <= 9; ++n) {
    const double b = second_order(worst_case_diagonal(n, 0), -1.0, Variant::ZScaled).delta_b2_coeff;
    CHECK(b > 1.0);
    CHECK(b < previous);
    previous = b;
  }
  CHECK(previous - 1.0 < 1e-3);
}

TEST_CASE("multi-solution diagonal uses the symmetric combination") {
  // Three solutions: the symmetric combination of the zero level couples with 3 x^2.
  const ViolationDiagonal diag(3, {0, 2, 0, 1, 1, 0, 3, 1});
  const auto p = second_order(diag, -1.0, Variant::Unscaled);
  CHECK(p.delta_a2_coeff == doctest::Approx(3.0 / -0.5));
  const double x = 1e-3;
  const auto [ea, eb] = exact_ab_levels(diag, x, -1.0, Variant::Unscaled);
  CHECK(ea == doctest::Approx(p.e_a0 + p.delta_a2_coeff * x * x).epsilon(1e-9));
  CHECK(eb == doctest::Approx(p.e_b0 + p.delta_b2_coeff * x * x).epsilon(1e-9));
}

TEST_CASE("prediction error against the numeric minimum") {
  // n = 7: exact minimum at x = 0.0615223 (independent numpy check), prediction 0.0447214.
  const auto r7 = prediction_error(worst_case_diagonal(7, 127), -1.0, Variant::Unscaled);
  REQUIRE(r7.abs_error);
  CHECK(r7.x_gap_numeric == doctest::Approx(0.0615223).epsilon(1e-4));
  CHECK(*r7.abs_error == doctest::Approx(0.0615223 - std::sqrt(1.0 / 500.0)).epsilon(1e-3));

  const auto r5 = prediction_error(worst_case_diagonal(5, 3), -1.0, Variant::Unscaled);
  REQUIRE(r5.abs_error);
  CHECK(std::isfinite(*r5.abs_error));

  const auto rs = prediction_error(worst_case_diagonal(7, 127), -1.0, Variant::ZScaled);
  CHECK_FALSE(rs.abs_error);
  CHECK(std::abs(rs.x_gap_numeric) <= 0.01);
  CHECK(rs.gap_numeric == doctest::Approx(0.5).epsilon(1e-9));

  const auto j = to_json(rs);
  CHECK(j["x_gap_predicted"].is_null());
  CHECK(j["variant"] == "z_scaled");
}

TEST_CASE("fitted coefficients approach the analytic values as the window shrinks") {
  const auto diag = worst_case_diagonal(7, 127);
  const auto wide = fit_level_coefficients(diag, -1.0, Variant::Unscaled, 0.01, 41);
  const auto narrow = fit_level_coefficients(diag, -1.0, Variant::Unscaled, 0.001, 41);
  CHECK(std::abs(narrow.b_coeff + 252.0) < std::abs(wide.b_coeff + 252.0));
  CHECK(narrow.b_coeff == doctest::Approx(-252.0).epsilon(1e-3));
  CHECK(narrow.a_coeff == doctest::Approx(-2.0).epsilon(1e-3));
  const auto quartic = fit_level_coefficients(diag, -1.0, Variant::Unscaled, 0.01, 41, 4);
  CHECK(quartic.b_coeff == doctest::Approx(-252.0).epsilon(5e-3));
}
