#pragma once

#include <cstddef>
#include <vector>

#include "idslab/matrix.hpp"
#include "idslab/operator.hpp"

namespace idslab {

/// Sorted eigenvalues of a Hermitian matrix.
struct Spectrum {
  std::vector<double> eigenvalues;  // ascending
  std::size_t source_dim = 0;
  /// Tie scale for counting (norm proxy of the source matrix).
  double scale = 0.0;
  /// max ||Hv - λv|| / ||H|| over the checked vectors.
  double residual_bound = 0.0;

  double min() const { return eigenvalues.front(); }
  double max() const { return eigenvalues.back(); }
};

struct EigenDecomposition {
  Spectrum spectrum;
  /// Row k holds the normalized eigenvector of spectrum.eigenvalues[k].
  ComplexMatrix vectors;
};

/// Full spectrum by Householder tridiagonalization and implicit-shift QL.
/// Real matrices take a real-arithmetic path. Throws ConvergenceError with the failing index.
Spectrum eigenvalues(const ComplexMatrix& h);
Spectrum eigenvalues(const HermitianOperator& op);

EigenDecomposition eigen_decomposition(const ComplexMatrix& h);
EigenDecomposition eigen_decomposition(const HermitianOperator& op);

/// Tie tolerance 1e-12 * scale: eigenvalues that close to E are not counted.
inline constexpr double kTieTolerance = 1e-12;

/// #{λ < E}, left-continuous in E.
std::size_t count_below(const Spectrum& spectrum, double energy);

/// Counts at each energy of an ascending grid.
std::vector<std::size_t> count_below(const Spectrum& spectrum, const std::vector<double>& energies);

/// Number of negative eigenvalues of H - E via Bunch-Kaufman LDL^† inertia.
/// Throws NearEigenvalueError (suggested shift 1e-10 * ||H||) on a near-singular pivot.
std::size_t count_below_inertia(const ComplexMatrix& h, double energy);
std::size_t count_below_inertia(const HermitianOperator& op, double energy);

/// exp(-t H). Throws InvalidArgument for t <= 0.
ComplexMatrix heat_kernel(const ComplexMatrix& h, double t);
ComplexMatrix heat_kernel(const HermitianOperator& op, double t);
ComplexMatrix heat_kernel(const EigenDecomposition& eig, double t);

/// Θ(E - H) = Σ_{λ_k < E} v_k v_k^†. Throws NearEigenvalueError when E is within
/// 1e-12 ||H|| of an eigenvalue.
ComplexMatrix spectral_projector(const ComplexMatrix& h, double energy);
ComplexMatrix spectral_projector(const HermitianOperator& op, double energy);
ComplexMatrix spectral_projector(const EigenDecomposition& eig, double energy);

/// Throws NearEigenvalueError if some eigenvalue lies within 1e-12 * scale of `energy`.
void require_separated(const Spectrum& spectrum, double energy);

}  // namespace idslab
