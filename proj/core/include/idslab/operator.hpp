#pragma once

#include <span>
#include <string>
#include <vector>

#include "idslab/lattice.hpp"
#include "idslab/matrix.hpp"

namespace idslab {

/// Dense complex-Hermitian matrix of the finite-volume magnetic Schrödinger operator
/// together with the box that fixes its site indexing.
class HermitianOperator {
 public:
  /// Wraps an arbitrary matrix on `box`. Throws InvalidArgument unless the matrix is
  /// n x n (n = box.site_count()) and exactly Hermitian.
  HermitianOperator(ComplexMatrix matrix, BoxSpec box);

  /// Wraps a Hermitian matrix on a 1D Dirichlet chain with unit spacing. For tests and
  /// generic linear algebra.
  static HermitianOperator from_matrix(ComplexMatrix matrix);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const BoxSpec& box() const noexcept { return box_; }
  std::size_t dim() const noexcept { return matrix_.rows(); }
  cplx operator()(std::size_t i, std::size_t j) const noexcept { return matrix_(i, j); }

  /// True when every entry has zero imaginary part (e.g. B = 0).
  bool is_real() const noexcept { return real_; }
  /// max |entry| times n, the scale for tie tolerances.
  double norm() const noexcept { return norm_; }

 private:
  ComplexMatrix matrix_;
  BoxSpec box_;
  bool real_ = false;
  double norm_ = 0.0;
};

/// Lattice discretization of (1/2)(i∇ + A)^2 + V with Peierls phases.
///
/// Hopping on the bond x -> y is -exp(i φ_xy) / (2h^2), φ_xy = -∫_x^y A·dl.
/// Kinetic diagonal: d/h^2 for Dirichlet and Periodic, (coordination)/(2h^2) for Neumann.
/// Periodic boxes use magnetic-periodic wrap phases and need B_jk h^2 L_j L_k ∈ 2πZ.
HermitianOperator build_hamiltonian(const BoxSpec& box, const MagneticField& field,
                                    std::span<const double> potential);

/// U^† H U with U = diag(exp(i chi)).
HermitianOperator gauge_transform(const HermitianOperator& op, std::span<const double> chi);

/// T_s^† H T_s for the discrete magnetic translation
/// (T_s ψ)(y) = exp[(i/2) Σ (s_j - y_j) B_jk s_k] ψ(y - s) on a periodic box.
/// The result equals the operator built from the potential V(· + s).
/// `field` must be the field the operator was built with.
HermitianOperator magnetic_translate(const HermitianOperator& op, const MagneticField& field,
                                     std::span<const int> shift);

/// Empty string if the periodic torus is consistent for `field`; otherwise a message naming
/// the required flux quantum. `per_side` additionally demands B_jk h^2 L_k ∈ 2πZ (needed for
/// unit magnetic translations).
std::string flux_commensurability_error(const BoxSpec& box, const MagneticField& field,
                                        bool per_side);

}  // namespace idslab
