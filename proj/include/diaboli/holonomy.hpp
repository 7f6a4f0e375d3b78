#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "diaboli/eigensolver.hpp"

namespace diaboli {

/// Closed polyline in (x, z) parameter space.
class LoopPath {
 public:
  LoopPath(std::vector<ParameterPoint> waypoints, int samples_per_edge);

  /// (0,1) -> (-1,1) -> (-1,-1) -> (1,-1) -> (1,1) -> (0,1)
  static LoopPath default_rectangle(int samples_per_edge = 64);
  /// Axis-aligned rectangle traversed counter-clockwise from (x0, z0).
  static LoopPath rectangle(double x0, double x1, double z0, double z1, int samples_per_edge = 64);

  const std::vector<ParameterPoint>& waypoints() const { return waypoints_; }
  int samples_per_edge() const { return samples_per_edge_; }
  std::size_t edge_count() const { return waypoints_.size() - 1; }

  LoopPath reversed() const;
  LoopPath with_samples(int samples_per_edge) const;

  /// Point on edge k at fraction t in [0, 1].
  ParameterPoint at(std::size_t edge, double t) const;
  double edge_length(std::size_t edge) const;
  double length() const;

 private:
  std::vector<ParameterPoint> waypoints_;
  int samples_per_edge_;
};

struct BerryOptions {
  double gap_floor = 1e-9;
  double overlap_floor = 0.5;
  double refine_trigger = 0.8;
  int max_depth = 22;
  /// When set, every solved eigenvector gets a pseudo-random sign before alignment.
  std::optional<std::uint64_t> gauge_scramble_seed;
};

struct TransportStep {
  std::size_t step = 0;
  ParameterPoint point;
  double e0 = 0.0;
  double e1 = 0.0;
  double overlap = 1.0;
  int cumulative_sign = 1;
};

struct BerryResult {
  bool phase_is_pi = false;
  int holonomy_sign = 1;
  double min_transport_overlap = 1.0;
  double min_gap_on_loop = 0.0;
  int refined_points = 0;
  std::vector<TransportStep> log;

  double phase() const;
};

/// Transports the ground state around the loop by sign alignment of successive
/// real eigenvectors. The gap that must stay open is the coupled-sector gap: the
/// deflated body states carry no head component and never mix with the ground state.
BerryResult berry_phase(const ViolationDiagonal& diag, Variant variant, const LoopPath& path,
                        const BerryOptions& options = {});

/// Phase = pi on the default rectangle.
bool solubility(const ViolationDiagonal& diag, Variant variant, const BerryOptions& options = {});

void write_transport_csv(std::ostream& out, const BerryResult& result);
nlohmann::json to_json(const BerryResult& result);

}  // namespace diaboli
