#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "diaboli/hamiltonian.hpp"

namespace diaboli {

/// Largest matrix accepted by the dense oracle path.
inline constexpr std::size_t kMaxDenseDimension = 4097;

struct Spectrum {
  /// All N+1 eigenvalues, ascending, deflated copies included.
  std::vector<double> eigenvalues;
  /// Unit ground eigenvector (body states first, head last) when requested.
  std::optional<Eigen::VectorXd> ground_vector;
  double gap01 = 0.0;
  /// Eigenvalues of the coupled sector: the head plus one symmetric combination
  /// per distinct body level. The remaining (deflated) eigenvectors have no
  /// head component for any parameter value and never mix with this sector.
  std::vector<double> coupled_eigenvalues;

  double ground_energy() const { return eigenvalues.front(); }
  double coupled_gap() const { return coupled_eigenvalues.size() > 1 ? coupled_eigenvalues[1] - coupled_eigenvalues[0] : 0.0; }
};

/// Body levels grouped by (relative 1e-13) equality.
struct LevelGroups {
  std::vector<double> levels;          // ascending distinct values
  std::vector<std::size_t> multiplicity;
  std::vector<std::size_t> group_of;   // body index -> group
};

LevelGroups group_levels(const std::vector<double>& body);

/// Eigen-decomposition of the coupled sector of an arrowhead matrix, expressed
/// in the orthonormal basis {u_0, ..., u_{J-1}, head} where u_j is the
/// normalized sum of the body states in group j.
struct CoupledDecomposition {
  LevelGroups groups;
  std::vector<double> eigenvalues;     // J+1 ascending
  Eigen::MatrixXd vectors;             // (J+1) x (J+1), columns orthonormal
};

CoupledDecomposition decompose_coupled(const ArrowheadHamiltonian& h);

/// Secular-equation solver with deflation of repeated body levels.
Spectrum eigen_arrowhead(const ArrowheadHamiltonian& h, bool want_ground_vector);

/// Dense symmetric diagonalization of the materialized matrix (oracle path).
Spectrum eigen_dense(const ArrowheadHamiltonian& h, bool want_vec = true);

/// True when the coupled eigenvalues interlace the distinct body levels.
bool interlaces(const ArrowheadHamiltonian& h, const Spectrum& s);

/// ||H v - lambda v|| for the ground pair.
double ground_residual(const ArrowheadHamiltonian& h, const Spectrum& s);

enum class SweepAxis { X, Z };

struct SweepSpec {
  SweepAxis axis = SweepAxis::X;
  double fixed = 0.0;    // value of the other parameter
  double from = 0.0;
  double to = 1.0;
  int samples = 101;
};

struct GapMinimum {
  ParameterPoint location;
  double gap = 0.0;
};

ParameterPoint sweep_point(const SweepSpec& spec, double t);

/// Coarse sampling of gap01 followed by golden-section refinement (1e-6 in the swept parameter).
GapMinimum min_gap_on_segment(const ViolationDiagonal& diag, Variant variant, const SweepSpec& spec);

/// Spectra at `samples` evenly spaced points; parallel across DIABOLI_THREADS workers.
std::vector<Spectrum> sweep_spectra(const ViolationDiagonal& diag, Variant variant, const SweepSpec& spec);

/// CSV `x,z,e0,...,e{levels-1},gap01`. levels <= 0 means every level.
void write_sweep_csv(std::ostream& out, const ViolationDiagonal& diag, Variant variant, const SweepSpec& spec,
                     int levels);

/// Runs fn(i) for i in [0, count) on worker_count() threads; results must be position-indexed.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace diaboli
