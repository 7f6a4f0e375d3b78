#include "diaboli/hamiltonian.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "diaboli/error.hpp"
#include "diaboli/format.hpp"

namespace diaboli {

Variant parse_variant(std::string_view name) {
  if (name == "unscaled") return Variant::Unscaled;
  if (name == "z_scaled" || name == "z-scaled" || name == "zscaled") return Variant::ZScaled;
  if (name == "x_scaled" || name == "x-scaled" || name == "xscaled") return Variant::XScaled;
  throw Error(ErrorKind::UnknownVariant, "'" + std::string(name) + "'");
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Unscaled: return "unscaled";
    case Variant::ZScaled: return "z_scaled";
    case Variant::XScaled: return "x_scaled";
  }
  throw Error(ErrorKind::UnknownVariant, std::to_string(static_cast<int>(v)));
}

ArrowheadHamiltonian::ArrowheadHamiltonian(std::vector<double> body_diag, double border, double head_diag,
                                           ParameterPoint params, Variant variant)
    : body_(std::move(body_diag)), border_(border), head_(head_diag), params_(params), variant_(variant) {
  if (body_.empty()) throw Error(ErrorKind::InvalidArgument, "arrowhead body must be non-empty");
  if (!std::isfinite(border_) || !std::isfinite(head_)) {
    throw Error(ErrorKind::InvalidArgument, "non-finite arrowhead entry");
  }
  for (double d : body_) {
    if (!std::isfinite(d)) throw Error(ErrorKind::InvalidArgument, "non-finite arrowhead entry");
  }
}

Eigen::VectorXd ArrowheadHamiltonian::apply(const Eigen::VectorXd& v) const {
  const auto n = static_cast<Eigen::Index>(body_.size());
  Eigen::VectorXd out(n + 1);
  double head_acc = head_ * v[n];
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i] = body_[static_cast<std::size_t>(i)] * v[i] + border_ * v[n];
    head_acc += border_ * v[i];
  }
  out[n] = head_acc;
  return out;
}

Eigen::MatrixXd ArrowheadHamiltonian::to_dense() const {
  const auto n = static_cast<Eigen::Index>(body_.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = body_[static_cast<std::size_t>(i)];
    m(i, n) = border_;
    m(n, i) = border_;
  }
  m(n, n) = head_;
  return m;
}

ArrowheadHamiltonian build(const ViolationDiagonal& diag, ParameterPoint p, Variant variant) {
  if (!std::isfinite(p.x) || !std::isfinite(p.z)) {
    throw Error(ErrorKind::InvalidArgument, "parameter point must be finite");
  }
  const double n_states = static_cast<double>(diag.size());
  double energy_scale = 1.0;
  double border = p.x;
  switch (variant) {
    case Variant::Unscaled: break;
    case Variant::ZScaled: energy_scale = n_states; break;
    case Variant::XScaled: border = p.x / std::sqrt(n_states); break;
    default: throw Error(ErrorKind::UnknownVariant, std::to_string(static_cast<int>(variant)));
  }
  std::vector<double> body(diag.size());
  const double shift = p.z / 4.0;
  for (std::size_t i = 0; i < diag.size(); ++i) body[i] = shift + energy_scale * diag[i];
  return ArrowheadHamiltonian(std::move(body), border, -shift, p, variant);
}

SubspaceMask::SubspaceMask(std::vector<Assignment> selected) : selected_(std::move(selected)) {
  if (selected_.empty()) throw Error(ErrorKind::EmptyMask, "subspace mask selects no states");
  for (std::size_t i = 1; i < selected_.size(); ++i) {
    if (selected_[i] <= selected_[i - 1]) {
      throw Error(ErrorKind::InvalidArgument, "subspace mask must be strictly increasing");
    }
  }
}

SubspaceMask SubspaceMask::range(Assignment first, Assignment last) {
  std::vector<Assignment> idx;
  for (Assignment i = first; i < last; ++i) idx.push_back(i);
  return SubspaceMask(std::move(idx));
}

ViolationDiagonal restrict(const ViolationDiagonal& diag, const SubspaceMask& mask) {
  std::vector<int> entries;
  entries.reserve(mask.size());
  for (Assignment i : mask.selected()) {
    if (i >= diag.size()) {
      throw Error(ErrorKind::IndexOutOfRange,
                  "mask index " + std::to_string(i) + " >= " + std::to_string(diag.size()));
    }
    entries.push_back(diag[i]);
  }
  return ViolationDiagonal(diag.n_vars(), std::move(entries));
}

void write_dense_csv(std::ostream& out, const ArrowheadHamiltonian& h) {
  const Eigen::MatrixXd m = h.to_dense();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
}

nlohmann::json describe(const ArrowheadHamiltonian& h) {
  const double n_vars = std::log2(static_cast<double>(h.body_size()));
  nlohmann::json j;
  j["variant"] = std::string(to_string(h.variant()));
  j["n"] = static_cast<int>(std::lround(n_vars));
  j["x"] = h.params().x;
  j["z"] = h.params().z;
  return j;
}

}  // namespace diaboli
