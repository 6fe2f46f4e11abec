#include "idslab/lattice.hpp"

#include <cmath>
#include <string>

#include "idslab/error.hpp"

namespace idslab {

std::string_view to_string(BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::Dirichlet: return "dirichlet";
    case BoundaryCondition::Neumann: return "neumann";
    case BoundaryCondition::Periodic: return "periodic";
  }
  return "unknown";
}

std::optional<BoundaryCondition> parse_boundary_condition(std::string_view name) {
  if (name == "dirichlet" || name == "D") return BoundaryCondition::Dirichlet;
  if (name == "neumann" || name == "N") return BoundaryCondition::Neumann;
  if (name == "periodic" || name == "P") return BoundaryCondition::Periodic;
  return std::nullopt;
}

BoxSpec::BoxSpec(std::vector<int> sides, double spacing, BoundaryCondition bc)
    : sides_(std::move(sides)), spacing_(spacing), bc_(bc) {
  if (sides_.empty() || sides_.size() > static_cast<std::size_t>(kMaxDim))
    throw InvalidArgument("box: dimension must be between 1 and " + std::to_string(kMaxDim));
  if (!(spacing_ > 0.0) || !std::isfinite(spacing_))
    throw InvalidArgument("box: spacing must be a positive finite number");
  site_count_ = 1;
  for (int l : sides_) {
    if (l < 1) throw InvalidArgument("box: every side needs at least one site");
    if (bc_ == BoundaryCondition::Periodic && l < 3)
      throw InvalidArgument("box: periodic axes need at least 3 sites");
    site_count_ *= static_cast<std::size_t>(l);
  }
}

BoxSpec BoxSpec::cube(int dim, int side, double spacing, BoundaryCondition bc) {
  if (dim < 1) throw InvalidArgument("box: dimension must be positive");
  return BoxSpec(std::vector<int>(static_cast<std::size_t>(dim), side), spacing, bc);
}

double BoxSpec::cell_volume() const noexcept { return std::pow(spacing_, dim()); }

std::size_t BoxSpec::index(const SiteCoords& c) const noexcept {
  std::size_t idx = 0;
  for (int a = dim() - 1; a >= 0; --a) idx = idx * static_cast<std::size_t>(sides_[a]) + static_cast<std::size_t>(c[a]);
  return idx;
}

SiteCoords BoxSpec::coords(std::size_t index) const noexcept {
  SiteCoords c{0, 0, 0};
  for (int a = 0; a < dim(); ++a) {
    const auto l = static_cast<std::size_t>(sides_[a]);
    c[a] = static_cast<int>(index % l);
    index /= l;
  }
  return c;
}

Point BoxSpec::position(std::size_t index) const noexcept {
  const SiteCoords c = coords(index);
  Point x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim(); ++a) x[a] = c[a] * spacing_;
  return x;
}

MagneticField::MagneticField(RealMatrix tensor) : tensor_(std::move(tensor)) {
  if (!tensor_.square() || tensor_.rows() == 0)
    throw InvalidArgument("field: tensor must be a non-empty square matrix");
  for (std::size_t j = 0; j < tensor_.rows(); ++j)
    for (std::size_t k = 0; k < tensor_.cols(); ++k) {
      if (!std::isfinite(tensor_(j, k))) throw InvalidArgument("field: tensor entries must be finite");
      if (tensor_(j, k) + tensor_(k, j) != 0.0)
        throw InvalidArgument("field: tensor is not skew-symmetric at (" + std::to_string(j) + "," +
                              std::to_string(k) + ")");
    }
}

MagneticField MagneticField::zero(int dim) {
  return MagneticField(RealMatrix(static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)));
}

MagneticField MagneticField::planar(int dim, double b) {
  if (dim < 2 && b != 0.0) throw InvalidArgument("field: a planar field needs d >= 2");
  RealMatrix t(static_cast<std::size_t>(dim), static_cast<std::size_t>(dim));
  if (dim >= 2) {
    t(0, 1) = b;
    t(1, 0) = -b;
  }
  return MagneticField(std::move(t));
}

bool MagneticField::is_zero() const noexcept {
  for (double v : tensor_.values())
    if (v != 0.0) return false;
  return true;
}

double MagneticField::vector_potential(const Point& x, int k) const noexcept {
  double a = 0.0;
  for (int j = 0; j < dim(); ++j) a += x[j] * (*this)(j, k);
  return 0.5 * a;
}

double MagneticField::bond_phase(const Point& x, int axis, double h) const noexcept {
  Point mid = x;
  mid[axis] += 0.5 * h;
  return -vector_potential(mid, axis) * h;
}

}  // namespace idslab
