#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "idslab/lattice.hpp"
#include "idslab/potential.hpp"

namespace idslab {

/// Exponents tied to the dimension: θ is the smallest integer > d/4; p(d) = 2 for d <= 3,
/// d/2 for d >= 5, and any value > 2 for d = 4 (reported as an open lower bound).
struct ModelDims {
  int d = 2;
  int theta = 1;
  double p_of_d = 2.0;
  bool p_is_open_lower_bound = false;

  static ModelDims for_dim(int d);
  /// Exponent d/2 - 2θ of the low-energy bound N(E) <= C |E|^{d/2-2θ}.
  double lifshits_exponent() const noexcept { return 0.5 * d - 2.0 * theta; }
};

/// Energies, realization count and seeding shared by all disorder averages.
struct RunSettings {
  std::vector<double> energies;  // ascending
  std::size_t realizations = 1;
  std::uint64_t master_seed = 0;
  unsigned workers = 0;  // 0 = hardware concurrency
};

/// Disorder-averaged N_{Λ,X}(E) / |Λ| on an energy grid.
struct IDSEstimate {
  std::vector<double> energies;
  std::vector<double> mean;
  std::vector<double> std_error;
  /// Across-realization standard deviation of N(E)/|Λ|.
  std::vector<double> std_dev;
  BoxSpec box;
  EnsembleSpec ensemble;
  std::size_t realizations = 0;
  std::uint64_t master_seed = 0;
  /// Volume used for normalization (|Λ|, or |Γ| for the localized estimator).
  double volume = 0.0;
  /// counts[r][i]: eigenvalues of realization r below energies[i] (finite_volume_ids only).
  std::vector<std::vector<std::size_t>> counts;
  double spectrum_min = 0.0;
  double spectrum_max = 0.0;
  /// Grid cells [E_i, E_{i+1}) where some realization's count jumps by more than 5% of n.
  std::vector<std::size_t> jump_cells;
  std::vector<std::string> warnings;
};

std::vector<double> uniform_grid(double lo, double hi, std::size_t points);

/// 201-point grid spanning [min spectrum - 1, max spectrum + 1] of realization 0.
std::vector<double> pilot_energy_grid(const EnsembleSpec& ensemble, const BoxSpec& box,
                                      const MagneticField& field, std::uint64_t master_seed,
                                      std::size_t points = 201);

/// Seed of realization r.
std::uint64_t realization_seed(std::uint64_t master_seed, std::size_t r);

IDSEstimate finite_volume_ids(const EnsembleSpec& ensemble, const BoxSpec& box,
                              const MagneticField& field, const RunSettings& settings);

/// (1/|Γ|) E Tr[χ_Γ Θ(E - H) χ_Γ] for the centered window Γ whose sides are
/// `window_fraction` of the box sides. The box stands in for the infinite-volume operator.
IDSEstimate localized_ids(const EnsembleSpec& ensemble, const BoxSpec& big_box,
                          double window_fraction, const MagneticField& field,
                          const RunSettings& settings);

/// Sites of the centered window used by localized_ids.
std::vector<std::size_t> window_sites(const BoxSpec& box, double window_fraction);

struct BcGapRow {
  BoxSpec box;  // Dirichlet variant
  double sup_gap = 0.0;
  double smoothed_gap = 0.0;
  std::size_t sandwich_violations = 0;
  IDSEstimate dirichlet;
  IDSEstimate neumann;
};

struct BcGapTable {
  std::vector<BcGapRow> rows;
  double smoothing_eps = 0.0;
  std::size_t total_violations() const noexcept;
  bool strictly_decreasing() const noexcept;
};

/// Dirichlet/Neumann comparison with common random numbers. `boxes` give the geometry;
/// their bc is ignored. The smoothed gap uses the Cauchy-smoothed I_E with width `eps`.
BcGapTable bc_gap(const EnsembleSpec& ensemble, const std::vector<BoxSpec>& boxes,
                  const MagneticField& field, const RunSettings& settings, double eps = 0.5);

struct TruncationRow {
  double level = 0.0;
  double sup_deviation = 0.0;
  double smoothed_deviation = 0.0;
};

struct TruncationTable {
  std::vector<TruncationRow> rows;
  /// max |V| over all sites and realizations.
  double realized_max_abs = 0.0;
  double smoothing_eps = 0.0;
};

TruncationTable truncation_sweep(const EnsembleSpec& ensemble, const BoxSpec& box,
                                 const MagneticField& field, const std::vector<double>& levels,
                                 const RunSettings& settings, double eps = 0.5);

struct TightnessReport {
  std::vector<double> energies;
  /// Across-volume max of N(E)/|Λ|.
  std::vector<double> max_values;
  std::vector<double> excluded_energies;
  double fitted_slope = 0.0;
  std::size_t fit_points = 0;
  double exponent_bound = 0.0;
};

/// Lookup of each energy in each estimate's grid; throws InvalidArgument if an energy is
/// missing or non-negative. Slope of log N vs log |E| by least squares over non-zero values.
TightnessReport tightness_check(const std::vector<IDSEstimate>& estimates,
                                const std::vector<double>& energies);

/// 1 / ((d/2)! (2π)^{d/2}).
double weyl_constant(int dim);

/// Upper edge of the band where the lattice dispersion is close to quadratic: 0.2 / h^2.
double faithful_band_edge(double spacing);

struct WeylRow {
  double physical_side = 0.0;
  double spacing = 0.0;
  double energy = 0.0;
  std::size_t count_dirichlet = 0;
  std::size_t count_neumann = 0;
  double ratio_dirichlet = 0.0;
  double ratio_neumann = 0.0;
  /// Ratio of the D/N averaged E^{-d/2} N(E) to the Weyl constant.
  double ratio = 0.0;
  bool faithful = true;
};

/// Free (V = 0, B = 0) counts via LDL^† inertia for every (side, h, E).
std::vector<WeylRow> weyl_check(int dim, const std::vector<double>& physical_sides,
                                const std::vector<double>& spacings,
                                const std::vector<double>& energies);

struct GaussianTailRow {
  int side = 0;
  double energy = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  double measured = 0.0;  // E^{-2} log N(E)
  double reference = 0.0;  // -1 / (2 C(0))
  bool excluded = false;
};

std::vector<GaussianTailRow> gaussian_tail_check(const Covariance& covariance, int dim,
                                                 const std::vector<int>& sides, double spacing,
                                                 const MagneticField& field,
                                                 BoundaryCondition bc,
                                                 const RunSettings& settings);

/// (B/2π) #{k >= 0 : B(k + 1/2) <= E}.
double landau_reference(double b, double energy);

struct LandauReport {
  double requested_b = 0.0;
  double effective_b = 0.0;  // nearest value with an integer number of flux quanta
  long flux_quanta = 0;
  double volume = 0.0;
  std::size_t cluster_count = 0;  // eigenvalues below B
  double expected_count = 0.0;    // B |Λ| / 2π
  double cluster_mean = 0.0;
  double cluster_spread = 0.0;
  double reference_step = 0.0;  // landau_reference(B, B) as states per volume
  double measured_step = 0.0;   // cluster_count / |Λ|
  std::vector<double> eigenvalues;
};

/// V = 0 on a 2D periodic box of `sides` with spacing h and field close to `b`.
LandauReport landau_cluster_check(int side_x, int side_y, double spacing, double b);

struct SupportReport {
  std::vector<double> energies;
  std::vector<double> mean;
  std::size_t growth_cells = 0;
  /// Eigenvalues not inside a growth cell of the averaged N (should be 0).
  std::size_t eigenvalues_outside_growth = 0;
  /// Per realization: growth cells with no eigenvalue of that realization within one cell.
  std::vector<std::size_t> uncovered_growth_cells;
  /// Maximal intervals inside [min, max] of the spectra where the averaged N is flat.
  std::vector<std::pair<double, double>> gaps;
};

SupportReport support_spectrum_check(const EnsembleSpec& ensemble, const BoxSpec& box,
                                     const MagneticField& field, const RunSettings& settings);

}  // namespace idslab
