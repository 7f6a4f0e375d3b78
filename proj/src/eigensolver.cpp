#include "diaboli/eigensolver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include "diaboli/error.hpp"
#include "diaboli/format.hpp"

namespace diaboli {

namespace {

constexpr double kGroupTolerance = 1e-13;
constexpr double kRootTolerance = 1e-14;
constexpr int kMaxBisection = 4000;

// A secular root stored as an offset from one of the poles; keeping the offset
// rather than the absolute value preserves precision when the root hugs a pole.
struct SecularRoot {
  std::size_t origin = 0;
  double offset = 0.0;
  double value = 0.0;
};

class SecularEquation {
 public:
  SecularEquation(const std::vector<double>& poles, std::vector<double> weights, double head)
      : poles_(poles), weights_(std::move(weights)), head_(head) {}

  // f(p_o + mu) = (head - p_o) - mu - sum_i w_i / (p_i - p_o - mu); strictly decreasing.
  double value(std::size_t origin, double mu) const {
    const double po = poles_[origin];
    double acc = (head_ - po) - mu;
    for (std::size_t i = 0; i < poles_.size(); ++i) acc -= weights_[i] / ((poles_[i] - po) - mu);
    return acc;
  }

  double derivative(std::size_t origin, double mu) const {
    const double po = poles_[origin];
    double acc = -1.0;
    for (std::size_t i = 0; i < poles_.size(); ++i) {
      const double d = (poles_[i] - po) - mu;
      acc -= weights_[i] / (d * d);
    }
    return acc;
  }

  // Root in (p_o + lo, p_o + hi), with f(lo) > 0 > f(hi) (endpoints may be poles).
  SecularRoot solve(std::size_t origin, double lo, double hi) const {
    int iter = 0;
    double mid = 0.5 * (lo + hi);
    while (hi - lo > kRootTolerance * std::min(std::abs(lo), std::abs(hi))) {
      if (++iter > kMaxBisection) {
        throw Error(ErrorKind::ConvergenceFailure, "secular bisection did not converge");
      }
      mid = lo + 0.5 * (hi - lo);
      if (mid <= lo || mid >= hi) break;
      const double f = value(origin, mid);
      if (f > 0.0) {
        lo = mid;
      } else if (f < 0.0) {
        hi = mid;
      } else {
        lo = hi = mid;
        break;
      }
    }
    mid = lo + 0.5 * (hi - lo);
    // One Newton polish, kept only if it stays inside the bracket.
    const double f = value(origin, mid);
    const double df = derivative(origin, mid);
    if (std::isfinite(f) && std::isfinite(df) && df != 0.0) {
      const double polished = mid - f / df;
      if (polished >= lo && polished <= hi) mid = polished;
    }
    return {origin, mid, poles_[origin] + mid};
  }

 private:
  const std::vector<double>& poles_;
  std::vector<double> weights_;
  double head_;
};

// Roots of the coupled sector; border must be non-zero.
std::vector<SecularRoot> secular_roots(const LevelGroups& g, double border, double head) {
  const std::size_t J = g.levels.size();
  std::vector<double> weights(J);
  double weight_sum = 0.0;
  for (std::size_t j = 0; j < J; ++j) {
    weights[j] = border * border * static_cast<double>(g.multiplicity[j]);
    weight_sum += weights[j];
  }
  const SecularEquation eq(g.levels, std::move(weights), head);
  const double spread = std::sqrt(weight_sum) + 1.0;

  std::vector<SecularRoot> roots;
  roots.reserve(J + 1);
  // Below the lowest pole.
  {
    const double lb = std::min(head, g.levels.front()) - spread;
    roots.push_back(eq.solve(0, lb - g.levels.front(), 0.0));
  }
  for (std::size_t j = 0; j + 1 < J; ++j) {
    const double width = g.levels[j + 1] - g.levels[j];
    const double half = 0.5 * width;
    if (eq.value(j, half) > 0.0) {
      roots.push_back(eq.solve(j + 1, -(width - half), 0.0));
    } else {
      roots.push_back(eq.solve(j, 0.0, half));
    }
  }
  {
    const double ub = std::max(head, g.levels.back()) + spread;
    roots.push_back(eq.solve(J - 1, 0.0, ub - g.levels.back()));
  }
  return roots;
}

// lambda_r - p_j evaluated relative to the root's origin pole.
double root_minus_pole(const LevelGroups& g, const SecularRoot& r, std::size_t j) {
  return (g.levels[r.origin] - g.levels[j]) + r.offset;
}

// Border values consistent with the computed roots (Loewner formula); eigenvectors
// built from them stay numerically orthogonal even for clustered roots.
std::vector<double> loewner_border(const LevelGroups& g, const std::vector<SecularRoot>& roots, double border) {
  const std::size_t J = g.levels.size();
  std::vector<double> out(J);
  const double sign = border < 0.0 ? -1.0 : 1.0;
  for (std::size_t j = 0; j < J; ++j) {
    double log_mag = 0.0;
    for (const auto& r : roots) log_mag += std::log(std::abs(root_minus_pole(g, r, j)));
    for (std::size_t i = 0; i < J; ++i) {
      if (i != j) log_mag -= std::log(std::abs(g.levels[i] - g.levels[j]));
    }
    out[j] = sign * std::exp(0.5 * log_mag);
  }
  return out;
}

// Column of the reduced eigenvector for a secular root: (c_j, head) with c_j = zhat_j / (lambda - p_j).
Eigen::VectorXd reduced_vector(const LevelGroups& g, const std::vector<double>& zhat, const SecularRoot& r) {
  const std::size_t J = g.levels.size();
  Eigen::VectorXd v(static_cast<Eigen::Index>(J + 1));
  for (std::size_t j = 0; j < J; ++j) v[static_cast<Eigen::Index>(j)] = zhat[j] / root_minus_pole(g, r, j);
  v[static_cast<Eigen::Index>(J)] = 1.0;
  v.normalize();
  return v;
}

Eigen::VectorXd expand_reduced(const LevelGroups& g, const Eigen::VectorXd& reduced) {
  const std::size_t N = g.group_of.size();
  const auto J = static_cast<Eigen::Index>(g.levels.size());
  Eigen::VectorXd full(static_cast<Eigen::Index>(N + 1));
  for (std::size_t i = 0; i < N; ++i) {
    const std::size_t j = g.group_of[i];
    full[static_cast<Eigen::Index>(i)] =
        reduced[static_cast<Eigen::Index>(j)] / std::sqrt(static_cast<double>(g.multiplicity[j]));
  }
  full[static_cast<Eigen::Index>(N)] = reduced[J];
  return full;
}

std::vector<double> with_deflated(const LevelGroups& g, const std::vector<double>& coupled) {
  std::vector<double> all = coupled;
  for (std::size_t j = 0; j < g.levels.size(); ++j) {
    all.insert(all.end(), g.multiplicity[j] - 1, g.levels[j]);
  }
  std::sort(all.begin(), all.end());
  return all;
}

Eigen::MatrixXd reduced_dense(const LevelGroups& g, double border, double head) {
  const auto J = static_cast<Eigen::Index>(g.levels.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(J + 1, J + 1);
  for (Eigen::Index j = 0; j < J; ++j) {
    m(j, j) = g.levels[static_cast<std::size_t>(j)];
    m(j, J) = m(J, j) = border * std::sqrt(static_cast<double>(g.multiplicity[static_cast<std::size_t>(j)]));
  }
  m(J, J) = head;
  return m;
}

// Head component >= 0; with a vanishing head component, the component sum >= 0.
void fix_sign(Eigen::VectorXd& v) {
  const double head = v[v.size() - 1];
  const double ref = std::abs(head) > 1e-300 ? head : v.sum();
  if (ref < 0.0) v = -v;
}

}  // namespace

LevelGroups group_levels(const std::vector<double>& body) {
  std::vector<std::size_t> order(body.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return body[a] < body[b]; });
  LevelGroups g;
  g.group_of.resize(body.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const double v = body[order[k]];
    const bool same = !g.levels.empty() &&
                      std::abs(v - g.levels.back()) <= kGroupTolerance * std::max(std::abs(v), std::abs(g.levels.back()));
    if (!same) {
      g.levels.push_back(v);
      g.multiplicity.push_back(0);
    }
    ++g.multiplicity.back();
    g.group_of[order[k]] = g.levels.size() - 1;
  }
  return g;
}

CoupledDecomposition decompose_coupled(const ArrowheadHamiltonian& h) {
  CoupledDecomposition d;
  d.groups = group_levels(h.body_diag());
  const std::size_t J = d.groups.levels.size();
  const auto dim = static_cast<Eigen::Index>(J + 1);
  d.vectors = Eigen::MatrixXd::Zero(dim, dim);
  if (h.border() == 0.0) {
    std::vector<std::pair<double, std::size_t>> entries;
    for (std::size_t j = 0; j < J; ++j) entries.emplace_back(d.groups.levels[j], j);
    entries.emplace_back(h.head_diag(), J);
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t r = 0; r < entries.size(); ++r) {
      d.eigenvalues.push_back(entries[r].first);
      d.vectors(static_cast<Eigen::Index>(entries[r].second), static_cast<Eigen::Index>(r)) = 1.0;
    }
    return d;
  }
  const auto roots = secular_roots(d.groups, h.border(), h.head_diag());
  const auto zhat = loewner_border(d.groups, roots, h.border());
  for (std::size_t r = 0; r < roots.size(); ++r) {
    d.eigenvalues.push_back(roots[r].value);
    d.vectors.col(static_cast<Eigen::Index>(r)) = reduced_vector(d.groups, zhat, roots[r]);
  }
  return d;
}

Spectrum eigen_arrowhead(const ArrowheadHamiltonian& h, bool want_ground_vector) {
  const LevelGroups g = group_levels(h.body_diag());
  Spectrum s;
  if (h.border() == 0.0) {
    s.coupled_eigenvalues = g.levels;
    s.coupled_eigenvalues.push_back(h.head_diag());
    std::sort(s.coupled_eigenvalues.begin(), s.coupled_eigenvalues.end());
    if (want_ground_vector) {
      Eigen::VectorXd reduced = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.levels.size() + 1));
      if (h.head_diag() <= g.levels.front()) {
        reduced[reduced.size() - 1] = 1.0;
      } else {
        reduced[0] = 1.0;
      }
      s.ground_vector = expand_reduced(g, reduced);
    }
  } else {
    const auto roots = secular_roots(g, h.border(), h.head_diag());
    for (const auto& r : roots) s.coupled_eigenvalues.push_back(r.value);
    if (want_ground_vector) {
      const auto zhat = loewner_border(g, roots, h.border());
      Eigen::VectorXd v = expand_reduced(g, reduced_vector(g, zhat, roots.front()));
      v.normalize();
      fix_sign(v);
      s.ground_vector = std::move(v);
    }
  }
  s.eigenvalues = with_deflated(g, s.coupled_eigenvalues);
  s.gap01 = s.eigenvalues.size() > 1 ? s.eigenvalues[1] - s.eigenvalues[0] : 0.0;
  return s;
}

Spectrum eigen_dense(const ArrowheadHamiltonian& h, bool want_vec) {
  if (h.dimension() > kMaxDenseDimension) {
    throw Error(ErrorKind::DimensionTooLarge,
                "dimension " + std::to_string(h.dimension()) + " exceeds " + std::to_string(kMaxDenseDimension));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      h.to_dense(), want_vec ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::ConvergenceFailure, "dense eigensolver failed");
  Spectrum s;
  const auto& ev = solver.eigenvalues();
  s.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  if (want_vec) {
    Eigen::VectorXd v = solver.eigenvectors().col(0);
    fix_sign(v);
    s.ground_vector = std::move(v);
  }
  s.gap01 = s.eigenvalues.size() > 1 ? s.eigenvalues[1] - s.eigenvalues[0] : 0.0;

  const LevelGroups g = group_levels(h.body_diag());
  if (g.levels.size() == h.body_diag().size()) {
    // Nothing deflates: the reduced matrix is the full one.
    s.coupled_eigenvalues = s.eigenvalues;
    return s;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> reduced(reduced_dense(g, h.border(), h.head_diag()),
                                                         Eigen::EigenvaluesOnly);
  const auto& rv = reduced.eigenvalues();
  s.coupled_eigenvalues.assign(rv.data(), rv.data() + rv.size());
  return s;
}

bool interlaces(const ArrowheadHamiltonian& h, const Spectrum& s) {
  const LevelGroups g = group_levels(h.body_diag());
  const auto& c = s.coupled_eigenvalues;
  if (c.size() != g.levels.size() + 1) return false;
  for (std::size_t j = 0; j < g.levels.size(); ++j) {
    if (!(c[j] <= g.levels[j] && g.levels[j] <= c[j + 1])) return false;
  }
  return true;
}

double ground_residual(const ArrowheadHamiltonian& h, const Spectrum& s) {
  if (!s.ground_vector) return std::numeric_limits<double>::infinity();
  const Eigen::VectorXd& v = *s.ground_vector;
  return (h.apply(v) - s.ground_energy() * v).norm();
}

ParameterPoint sweep_point(const SweepSpec& spec, double t) {
  return spec.axis == SweepAxis::X ? ParameterPoint{t, spec.fixed} : ParameterPoint{spec.fixed, t};
}

namespace {

double sample_at(const SweepSpec& spec, int k) {
  if (spec.samples == 1) return spec.from;
  const double frac = static_cast<double>(k) / static_cast<double>(spec.samples - 1);
  return spec.from + frac * (spec.to - spec.from);
}

void validate_sweep(const SweepSpec& spec, int min_samples) {
  if (spec.samples < min_samples) {
    throw Error(ErrorKind::InvalidArgument, "sweep needs at least " + std::to_string(min_samples) + " samples");
  }
  if (!std::isfinite(spec.from) || !std::isfinite(spec.to) || !std::isfinite(spec.fixed)) {
    throw Error(ErrorKind::InvalidArgument, "sweep range must be finite");
  }
}

}  // namespace

GapMinimum min_gap_on_segment(const ViolationDiagonal& diag, Variant variant, const SweepSpec& spec) {
  validate_sweep(spec, 3);
  auto gap_at = [&](double t) { return eigen_arrowhead(build(diag, sweep_point(spec, t), variant), false).gap01; };

  std::vector<double> coarse(static_cast<std::size_t>(spec.samples));
  parallel_for(coarse.size(), [&](std::size_t k) { coarse[k] = gap_at(sample_at(spec, static_cast<int>(k))); });
  const auto best = static_cast<int>(std::min_element(coarse.begin(), coarse.end()) - coarse.begin());

  double best_t = sample_at(spec, best);
  double best_gap = coarse[static_cast<std::size_t>(best)];
  double a = sample_at(spec, std::max(best - 1, 0));
  double b = sample_at(spec, std::min(best + 1, spec.samples - 1));
  if (a > b) std::swap(a, b);

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = gap_at(c);
  double fd = gap_at(d);
  int iter = 0;
  while (b - a > 1e-6) {
    if (++iter > 200) throw Error(ErrorKind::ConvergenceFailure, "golden-section search did not converge");
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = gap_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = gap_at(d);
    }
  }
  for (auto [t, f] : {std::pair{c, fc}, std::pair{d, fd}}) {
    if (f < best_gap) {
      best_gap = f;
      best_t = t;
    }
  }
  return {sweep_point(spec, best_t), best_gap};
}

std::vector<Spectrum> sweep_spectra(const ViolationDiagonal& diag, Variant variant, const SweepSpec& spec) {
  validate_sweep(spec, 1);
  std::vector<Spectrum> out(static_cast<std::size_t>(spec.samples));
  parallel_for(out.size(), [&](std::size_t k) {
    out[k] = eigen_arrowhead(build(diag, sweep_point(spec, sample_at(spec, static_cast<int>(k))), variant), false);
  });
  return out;
}

void write_sweep_csv(std::ostream& out, const ViolationDiagonal& diag, Variant variant, const SweepSpec& spec,
                     int levels) {
  const auto spectra = sweep_spectra(diag, variant, spec);
  const std::size_t dim = diag.size() + 1;
  const std::size_t shown = levels <= 0 ? dim : std::min(dim, static_cast<std::size_t>(levels));
  out << "x,z";
  for (std::size_t l = 0; l < shown; ++l) out << ",e" << l;
  out << ",gap01\n";
  for (std::size_t k = 0; k < spectra.size(); ++k) {
    const auto p = sweep_point(spec, sample_at(spec, static_cast<int>(k)));
    out << format_double(p.x) << ',' << format_double(p.z);
    for (std::size_t l = 0; l < shown; ++l) out << ',' << format_double(spectra[k].eigenvalues[l]);
    out << ',' << format_double(spectra[k].gap01) << '\n';
  }
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace diaboli
