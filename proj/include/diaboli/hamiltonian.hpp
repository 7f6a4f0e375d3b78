#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "diaboli/instance.hpp"

namespace diaboli {

/// How the problem size enters the Hamiltonian.
///   Unscaled: body = z/4 + h_i, border = x
///   ZScaled:  body = z/4 + N h_i, border = x
///   XScaled:  body = z/4 + h_i, border = x / sqrt(N)
enum class Variant { Unscaled, ZScaled, XScaled };

Variant parse_variant(std::string_view name);
std::string_view to_string(Variant v);

struct ParameterPoint {
  double x = 0.0;
  double z = 0.0;
  friend bool operator==(const ParameterPoint&, const ParameterPoint&) = default;
};

/// Symmetric arrowhead matrix: N body states on the diagonal, one head state
/// (stored last, index N) coupled to every body state by the same border value.
class ArrowheadHamiltonian {
 public:
  ArrowheadHamiltonian(std::vector<double> body_diag, double border, double head_diag,
                       ParameterPoint params = {}, Variant variant = Variant::Unscaled);

  const std::vector<double>& body_diag() const { return body_; }
  double border() const { return border_; }
  double head_diag() const { return head_; }
  ParameterPoint params() const { return params_; }
  Variant variant() const { return variant_; }

  std::size_t body_size() const { return body_.size(); }
  std::size_t dimension() const { return body_.size() + 1; }

  /// y = H v for a vector of length dimension().
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;

  Eigen::MatrixXd to_dense() const;

 private:
  std::vector<double> body_;
  double border_;
  double head_;
  ParameterPoint params_;
  Variant variant_;
};

ArrowheadHamiltonian build(const ViolationDiagonal& diag, ParameterPoint p, Variant variant);

/// Sorted, strictly increasing subset of assignment indices.
class SubspaceMask {
 public:
  explicit SubspaceMask(std::vector<Assignment> selected);
  /// Contiguous index range [first, last).
  static SubspaceMask range(Assignment first, Assignment last);

  const std::vector<Assignment>& selected() const { return selected_; }
  std::size_t size() const { return selected_.size(); }

 private:
  std::vector<Assignment> selected_;
};

ViolationDiagonal restrict(const ViolationDiagonal& diag, const SubspaceMask& mask);

void write_dense_csv(std::ostream& out, const ArrowheadHamiltonian& h);
nlohmann::json describe(const ArrowheadHamiltonian& h);

}  // namespace diaboli
