#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "idslab/matrix.hpp"

namespace idslab {

inline constexpr int kMaxDim = 3;

enum class BoundaryCondition { Dirichlet, Neumann, Periodic };

std::string_view to_string(BoundaryCondition bc);
std::optional<BoundaryCondition> parse_boundary_condition(std::string_view name);

using SiteCoords = std::array<int, kMaxDim>;
using Point = std::array<double, kMaxDim>;

/// Finite lattice box: `sides[j]` sites along axis j, lattice constant `spacing`.
///
/// Site i sits at physical position coords(i) * spacing, so the box occupies
/// [0, (L_j - 1) h] along each axis. Axis 0 varies fastest in the linear index.
class BoxSpec {
 public:
  BoxSpec(std::vector<int> sides, double spacing, BoundaryCondition bc);

  /// Cubic box of side `side` in `dim` dimensions.
  static BoxSpec cube(int dim, int side, double spacing, BoundaryCondition bc);

  int dim() const noexcept { return static_cast<int>(sides_.size()); }
  const std::vector<int>& sides() const noexcept { return sides_; }
  int side(int axis) const { return sides_.at(static_cast<std::size_t>(axis)); }
  double spacing() const noexcept { return spacing_; }
  BoundaryCondition bc() const noexcept { return bc_; }

  std::size_t site_count() const noexcept { return site_count_; }
  /// Volume of one site cell, h^d.
  double cell_volume() const noexcept;
  /// |Λ| = n h^d.
  double volume() const noexcept { return static_cast<double>(site_count_) * cell_volume(); }

  std::size_t index(const SiteCoords& c) const noexcept;
  SiteCoords coords(std::size_t index) const noexcept;
  Point position(std::size_t index) const noexcept;

  BoxSpec with_bc(BoundaryCondition bc) const { return BoxSpec(sides_, spacing_, bc); }

  bool operator==(const BoxSpec&) const = default;

 private:
  std::vector<int> sides_;
  double spacing_;
  BoundaryCondition bc_;
  std::size_t site_count_ = 0;
};

/// Constant magnetic field given by a skew-symmetric tensor B_jk.
/// The induced vector potential is the symmetric gauge A_k(x) = 1/2 sum_j x_j B_jk.
class MagneticField {
 public:
  /// Throws InvalidArgument unless `tensor` is square, finite and exactly skew-symmetric.
  explicit MagneticField(RealMatrix tensor);

  static MagneticField zero(int dim);
  /// Field B_01 = -B_10 = b in the (0,1) plane.
  static MagneticField planar(int dim, double b);

  int dim() const noexcept { return static_cast<int>(tensor_.rows()); }
  double operator()(int j, int k) const noexcept {
    return tensor_(static_cast<std::size_t>(j), static_cast<std::size_t>(k));
  }
  const RealMatrix& tensor() const noexcept { return tensor_; }
  bool is_zero() const noexcept;

  /// A_k(x) for the symmetric gauge.
  double vector_potential(const Point& x, int k) const noexcept;
  /// Peierls phase -∫ A·dl along the straight bond x -> x + h e_axis.
  /// Exact for the linear gauge: -A_axis(midpoint) * h.
  double bond_phase(const Point& x, int axis, double h) const noexcept;

  bool operator==(const MagneticField&) const = default;

 private:
  RealMatrix tensor_;
};

}  // namespace idslab
