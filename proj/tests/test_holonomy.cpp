#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "diaboli/error.hpp"
#include "diaboli/holonomy.hpp"

using namespace diaboli;

namespace {

ErrorKind path_error(std::vector<ParameterPoint> w) {
  try {
    LoopPath(std::move(w), 8);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected a path error");
  return ErrorKind::InvalidArgument;
}

CnfInstance all_patterns() {
  std::vector<Clause> clauses;
  for (int mask = 0; mask < 8; ++mask) {
    clauses.push_back({Literal{1, (mask & 1) != 0}, Literal{2, (mask & 2) != 0}, Literal{3, (mask & 4) != 0}});
  }
  return CnfInstance::make(3, clauses);
}

}  // namespace

TEST_CASE("loop path validation") {
  CHECK(path_error({{0, 1}, {-1, 1}, {-1, -1}}) == ErrorKind::OpenLoop);
  CHECK(path_error({{0, 1}, {1, 1}, {0, 1}}) == ErrorKind::InvalidArgument);
  CHECK(path_error({{-1, 0}, {1, 0}, {1, 1}, {-1, 0}}) == ErrorKind::InvalidArgument);
  const auto rect = LoopPath::default_rectangle();
  CHECK(rect.edge_count() == 5);
  CHECK(rect.length() == doctest::Approx(8.0));
  CHECK(rect.reversed().waypoints().front() == ParameterPoint{0, 1});
  CHECK(rect.reversed().waypoints()[1] == ParameterPoint{1, 1});
}

TEST_CASE("worst case n = 7 acquires a phase of pi") {
  const auto r = berry_phase(worst_case_diagonal(7, 127), Variant::Unscaled, LoopPath::default_rectangle());
  CHECK(r.phase_is_pi);
  CHECK(r.holonomy_sign == -1);
  CHECK(r.min_transport_overlap > 0.5);
  CHECK(r.min_gap_on_loop > 0.05);
  CHECK(r.log.front().point == ParameterPoint{0, 1});
  CHECK(r.log.front().e0 == -0.25);
  CHECK(r.log.back().cumulative_sign == -1);
}

TEST_CASE("insoluble diagonal acquires no phase") {
  const auto r = berry_phase(worst_case_diagonal(7, std::nullopt), Variant::Unscaled, LoopPath::default_rectangle());
  CHECK_FALSE(r.phase_is_pi);
  CHECK(r.holonomy_sign == 1);
}

TEST_CASE("two-level conical intersection") {
  const auto r = berry_phase(ViolationDiagonal(1, {0}), Variant::Unscaled, LoopPath::default_rectangle(16));
  CHECK(r.phase_is_pi);
}

TEST_CASE("solubility on small instances") {
  CHECK(solubility(worst_case_diagonal(5, 3), Variant::Unscaled));
  CHECK_FALSE(solubility(violation_diagonal(all_patterns()), Variant::Unscaled));
  CHECK(solubility(violation_diagonal(parse_dimacs("p cnf 3 1\n1 2 3 0")), Variant::Unscaled));
}

TEST_CASE("all variants agree with brute force on random instances") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + trial % 4;
    const int m = 1 + static_cast<int>(rng() % (6 * n));
    const auto diag = violation_diagonal(random_instance(n, m, rng));
    const bool truth = brute_force_solubility(diag).soluble;
    for (auto v : {Variant::Unscaled, Variant::ZScaled, Variant::XScaled}) CHECK(solubility(diag, v) == truth);
  }
}

TEST_CASE("orientation, discretization and gauge invariance") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto diag = violation_diagonal(random_instance(5, 5 + static_cast<int>(rng() % 20), rng));
    const auto path = LoopPath::default_rectangle(32);
    const auto base = berry_phase(diag, Variant::Unscaled, path);
    CHECK(berry_phase(diag, Variant::Unscaled, path.reversed()).holonomy_sign == base.holonomy_sign);
    CHECK(berry_phase(diag, Variant::Unscaled, path.with_samples(64)).holonomy_sign == base.holonomy_sign);
    CHECK(berry_phase(diag, Variant::Unscaled, path.with_samples(128)).holonomy_sign == base.holonomy_sign);
    BerryOptions scrambled;
    scrambled.gauge_scramble_seed = static_cast<std::uint64_t>(trial);
    CHECK(berry_phase(diag, Variant::Unscaled, path, scrambled).holonomy_sign == base.holonomy_sign);
  }
}

TEST_CASE("a loop that does not wind around the origin gives no phase") {
  const auto r = berry_phase(worst_case_diagonal(6, 17), Variant::Unscaled, LoopPath::rectangle(0.3, 0.8, -0.5, 0.5));
  CHECK_FALSE(r.phase_is_pi);
}

TEST_CASE("multi-solution instances keep the coupled gap open") {
  const ViolationDiagonal diag(3, {0, 2, 0, 1, 1, 0, 3, 1});
  // The full spectrum is degenerate at (0, -1), the coupled sector is not.
  CHECK(eigen_arrowhead(build(diag, {0, -1}, Variant::Unscaled), false).gap01 == 0.0);
  const auto r = berry_phase(diag, Variant::Unscaled, LoopPath::default_rectangle());
  CHECK(r.phase_is_pi);
  CHECK(r.min_gap_on_loop > 0.1);
}

TEST_CASE("gap floor and refinement limits raise errors") {
  BerryOptions strict;
  strict.gap_floor = 1.0;
  try {
    berry_phase(worst_case_diagonal(3, 1), Variant::Unscaled, LoopPath::default_rectangle(), strict);
    FAIL("expected DegenerateOnLoop");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateOnLoop);
  }
  BerryOptions shallow;
  shallow.max_depth = 0;
  shallow.overlap_floor = 0.999999;
  shallow.refine_trigger = 0.999999;
  try {
    berry_phase(worst_case_diagonal(7, 1), Variant::Unscaled, LoopPath::default_rectangle(4), shallow);
    FAIL("expected RefinementExhausted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RefinementExhausted);
  }
}

TEST_CASE("adaptive refinement concentrates near the avoided crossing") {
  const auto r = berry_phase(worst_case_diagonal(10, 5), Variant::Unscaled, LoopPath::default_rectangle());
  CHECK(r.phase_is_pi);
  CHECK(r.refined_points > 0);
  CHECK(r.min_transport_overlap >= 0.8);
}

TEST_CASE("transport CSV and JSON") {
  const auto r = berry_phase(ViolationDiagonal(1, {0}), Variant::Unscaled, LoopPath::default_rectangle(1));
  std::ostringstream csv;
  write_transport_csv(csv, r);
  const auto text = csv.str();
  CHECK(text.rfind("step,x,z,e0,e1,overlap,cumulative_sign\n0,0,1,", 0) == 0);
  const auto j = to_json(r);
  CHECK(j["phase"] == "pi");
  CHECK(j["holonomy_sign"] == -1);
}
