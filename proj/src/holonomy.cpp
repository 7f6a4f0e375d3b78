#include "diaboli/holonomy.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <set>

#include "diaboli/error.hpp"
#include "diaboli/format.hpp"

namespace diaboli {

namespace {

bool segment_hits_origin(ParameterPoint a, ParameterPoint b) {
  const double cross = a.x * b.z - a.z * b.x;
  if (cross != 0.0) return false;
  // Collinear with the origin: check that the origin lies between the endpoints.
  const double dot = a.x * b.x + a.z * b.z;
  return dot <= 0.0;
}

}  // namespace

LoopPath::LoopPath(std::vector<ParameterPoint> waypoints, int samples_per_edge)
    : waypoints_(std::move(waypoints)), samples_per_edge_(samples_per_edge) {
  if (samples_per_edge_ < 1) throw Error(ErrorKind::InvalidArgument, "samples_per_edge must be positive");
  if (waypoints_.size() < 2 || !(waypoints_.front() == waypoints_.back())) {
    throw Error(ErrorKind::OpenLoop, "first and last waypoints differ");
  }
  std::set<std::pair<double, double>> distinct;
  for (const auto& p : waypoints_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.z)) throw Error(ErrorKind::InvalidArgument, "non-finite waypoint");
    distinct.emplace(p.x, p.z);
  }
  if (distinct.size() < 3) throw Error(ErrorKind::InvalidArgument, "loop needs at least 3 distinct waypoints");
  for (std::size_t k = 0; k + 1 < waypoints_.size(); ++k) {
    if (segment_hits_origin(waypoints_[k], waypoints_[k + 1])) {
      throw Error(ErrorKind::InvalidArgument, "loop passes through the origin");
    }
  }
}

LoopPath LoopPath::default_rectangle(int samples_per_edge) {
  return LoopPath({{0, 1}, {-1, 1}, {-1, -1}, {1, -1}, {1, 1}, {0, 1}}, samples_per_edge);
}

LoopPath LoopPath::rectangle(double x0, double x1, double z0, double z1, int samples_per_edge) {
  return LoopPath({{x0, z0}, {x1, z0}, {x1, z1}, {x0, z1}, {x0, z0}}, samples_per_edge);
}

LoopPath LoopPath::reversed() const {
  return LoopPath(std::vector<ParameterPoint>(waypoints_.rbegin(), waypoints_.rend()), samples_per_edge_);
}

LoopPath LoopPath::with_samples(int samples_per_edge) const { return LoopPath(waypoints_, samples_per_edge); }

ParameterPoint LoopPath::at(std::size_t edge, double t) const {
  const auto& a = waypoints_[edge];
  const auto& b = waypoints_[edge + 1];
  if (t == 1.0) return b;
  return {a.x + t * (b.x - a.x), a.z + t * (b.z - a.z)};
}

double LoopPath::edge_length(std::size_t edge) const {
  const auto& a = waypoints_[edge];
  const auto& b = waypoints_[edge + 1];
  return std::hypot(b.x - a.x, b.z - a.z);
}

double LoopPath::length() const {
  double total = 0.0;
  for (std::size_t k = 0; k < edge_count(); ++k) total += edge_length(k);
  return total;
}

double BerryResult::phase() const { return phase_is_pi ? std::numbers::pi : 0.0; }

namespace {

struct Sample {
  ParameterPoint point;
  Eigen::VectorXd vector;
  double e0 = 0.0;
  double e1 = 0.0;
};

class Transporter {
 public:
  Transporter(const ViolationDiagonal& diag, Variant variant, const BerryOptions& options, BerryResult& result)
      : diag_(diag), variant_(variant), options_(options), result_(result) {
    if (options_.gauge_scramble_seed) rng_.seed(*options_.gauge_scramble_seed);
  }

  Sample solve(ParameterPoint p) {
    const auto s = eigen_arrowhead(build(diag_, p, variant_), true);
    const double gap = s.coupled_gap();
    if (!(gap > options_.gap_floor)) {
      throw Error(ErrorKind::DegenerateOnLoop, "ground state degenerate at (x=" + format_double(p.x) +
                                                   ", z=" + format_double(p.z) + "), gap " + format_double(gap));
    }
    result_.min_gap_on_loop = std::min(result_.min_gap_on_loop, gap);
    Sample out{p, *s.ground_vector, s.coupled_eigenvalues[0], s.coupled_eigenvalues[1]};
    if (options_.gauge_scramble_seed && (rng_() & 1u)) out.vector = -out.vector;
    return out;
  }

  // Aligns `next` with `prev`, refining the segment between them while the overlap is poor.
  void advance(const Sample& prev, Sample next, int depth) {
    double overlap = prev.vector.dot(next.vector);
    if (std::abs(overlap) < options_.refine_trigger) {
      if (depth < options_.max_depth) {
        const ParameterPoint mid{0.5 * (prev.point.x + next.point.x), 0.5 * (prev.point.z + next.point.z)};
        ++result_.refined_points;
        Sample middle = solve(mid);
        advance(prev, middle, depth + 1);
        advance(last_, std::move(next), depth + 1);
        return;
      }
      if (std::abs(overlap) < options_.overlap_floor) {
        throw Error(ErrorKind::RefinementExhausted,
                    "overlap " + format_double(overlap) + " after " + std::to_string(depth) + " bisections");
      }
    }
    if (overlap < 0.0) {
      next.vector = -next.vector;
      overlap = -overlap;
    }
    result_.min_transport_overlap = std::min(result_.min_transport_overlap, overlap);
    record(next, overlap);
  }

  void start(Sample first) { record(first, 1.0); }
  const Sample& last() const { return last_; }
  const Eigen::VectorXd& initial() const { return initial_; }

 private:
  void record(const Sample& s, double overlap) {
    if (result_.log.empty()) initial_ = s.vector;
    const int sign = s.vector.dot(initial_) < 0.0 ? -1 : 1;
    result_.log.push_back({result_.log.size(), s.point, s.e0, s.e1, overlap, sign});
    last_ = s;
  }

  const ViolationDiagonal& diag_;
  Variant variant_;
  const BerryOptions& options_;
  BerryResult& result_;
  std::mt19937_64 rng_;
  Sample last_;
  Eigen::VectorXd initial_;
};

}  // namespace

BerryResult berry_phase(const ViolationDiagonal& diag, Variant variant, const LoopPath& path,
                        const BerryOptions& options) {
  BerryResult result;
  result.min_gap_on_loop = std::numeric_limits<double>::infinity();
  Transporter transport(diag, variant, options, result);
  transport.start(transport.solve(path.waypoints().front()));
  const int samples = path.samples_per_edge();
  for (std::size_t edge = 0; edge < path.edge_count(); ++edge) {
    for (int k = 1; k <= samples; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(samples);
      transport.advance(transport.last(), transport.solve(path.at(edge, t)), 0);
    }
  }
  // The last sample sits on the starting point; compare it with the initial vector.
  const double closure = transport.last().vector.dot(transport.initial());
  result.holonomy_sign = closure < 0.0 ? -1 : 1;
  result.phase_is_pi = result.holonomy_sign < 0;
  return result;
}

bool solubility(const ViolationDiagonal& diag, Variant variant, const BerryOptions& options) {
  return berry_phase(diag, variant, LoopPath::default_rectangle(), options).phase_is_pi;
}

void write_transport_csv(std::ostream& out, const BerryResult& result) {
  out << "step,x,z,e0,e1,overlap,cumulative_sign\n";
  for (const auto& s : result.log) {
    out << s.step << ',' << format_double(s.point.x) << ',' << format_double(s.point.z) << ','
        << format_double(s.e0) << ',' << format_double(s.e1) << ',' << format_double(s.overlap) << ','
        << s.cumulative_sign << '\n';
  }
}

nlohmann::json to_json(const BerryResult& result) {
  nlohmann::json j;
  j["phase"] = result.phase_is_pi ? "pi" : "0";
  j["holonomy_sign"] = result.holonomy_sign;
  j["min_transport_overlap"] = result.min_transport_overlap;
  j["min_gap_on_loop"] = result.min_gap_on_loop;
  j["refined_points"] = result.refined_points;
  j["steps"] = result.log.size();
  return j;
}

}  // namespace diaboli
