#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "idslab/lattice.hpp"
#include "idslab/rng.hpp"

namespace idslab {

enum class EnsembleKind { Alloy, Poisson, Gaussian };
enum class ProfileShape { UnitCube, GaussianBump, Exponential };
enum class CouplingKind { Uniform, Gaussian, TwoPoint };
enum class CovarianceKind { GaussianBump, Exponential };

std::string_view to_string(EnsembleKind k);
std::string_view to_string(ProfileShape s);
std::string_view to_string(CouplingKind k);
std::string_view to_string(CovarianceKind k);
std::optional<EnsembleKind> parse_ensemble_kind(std::string_view s);
std::optional<ProfileShape> parse_profile_shape(std::string_view s);
std::optional<CouplingKind> parse_coupling_kind(std::string_view s);
std::optional<CovarianceKind> parse_covariance_kind(std::string_view s);

/// Single-site profile u. All built-in shapes have compact support.
///
///  - UnitCube:     amplitude * 1[y ∈ [-1/2, 1/2)^d]
///  - GaussianBump: amplitude * exp(-|y|^2 / (2 width^2)) for |y| <= radius
///  - Exponential:  amplitude * exp(-|y| / width) for |y| <= radius
struct Profile {
  ProfileShape shape = ProfileShape::UnitCube;
  double amplitude = 1.0;
  double width = 1.0;
  double radius = 0.5;

  double operator()(const Point& y, int dim) const noexcept;
  /// Half-width of the axis-aligned box containing the support.
  double support_half_width() const noexcept;
  double max_abs() const noexcept { return amplitude < 0 ? -amplitude : amplitude; }

  static Profile unit_cube(double amplitude = 1.0) { return {ProfileShape::UnitCube, amplitude, 1.0, 0.5}; }

  bool operator==(const Profile&) const = default;
};

/// Distribution of the alloy couplings λ_j.
///  - Uniform:  uniform on [a, b]
///  - Gaussian: centered normal with standard deviation sigma
///  - TwoPoint: a with probability p, b otherwise
struct CouplingDist {
  CouplingKind kind = CouplingKind::Uniform;
  double a = 0.0;
  double b = 1.0;
  double sigma = 1.0;
  double p = 0.5;

  double sample(Rng& rng) const;
  /// E|λ|^r, closed form.
  double abs_moment(double r) const;
  /// sup |λ| if bounded.
  std::optional<double> bound() const;
  bool nonnegative() const noexcept;

  static CouplingDist uniform(double a, double b) { return {CouplingKind::Uniform, a, b, 1.0, 0.5}; }
  static CouplingDist two_point(double a, double b, double p = 0.5) { return {CouplingKind::TwoPoint, a, b, 1.0, p}; }
  static CouplingDist gaussian(double sigma) { return {CouplingKind::Gaussian, 0.0, 0.0, sigma, 0.5}; }

  bool operator==(const CouplingDist&) const = default;
};

/// Stationary covariance C(x) of the Gaussian ensemble.
///  - GaussianBump: c0 exp(-|x|^2 / length^2)
///  - Exponential:  c0 exp(-|x| / length)
struct Covariance {
  CovarianceKind kind = CovarianceKind::GaussianBump;
  double c0 = 1.0;
  double length = 1.0;

  double operator()(double distance) const noexcept;

  bool operator==(const Covariance&) const = default;
};

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::Alloy;
  Profile profile;
  CouplingDist coupling;
  double intensity = 0.0;  // ρ, impurities per unit volume
  Covariance covariance;
  /// Set by truncate(): values with |V| >= truncation_level were zeroed.
  std::optional<double> truncation_level;

  static EnsembleSpec alloy(Profile u, CouplingDist coupling);
  static EnsembleSpec poisson(Profile u, double intensity);
  static EnsembleSpec gaussian(Covariance c);
  /// V ≡ 0, expressed as the empty Poisson process.
  static EnsembleSpec zero();

  bool nonnegative() const noexcept;
  bool is_zero() const noexcept;
  /// Throws InvalidArgument describing the first invalid parameter.
  void validate() const;

  bool operator==(const EnsembleSpec&) const = default;
};

/// One realization V^(ω) on the lattice sites of `box`.
struct PotentialSample {
  std::vector<double> values;
  EnsembleSpec ensemble;
  std::uint64_t seed = 0;
  BoxSpec box;

  double max_abs() const noexcept;
};

PotentialSample sample_alloy(const EnsembleSpec& spec, const BoxSpec& box, std::uint64_t seed);
PotentialSample sample_poisson(const EnsembleSpec& spec, const BoxSpec& box, std::uint64_t seed);
PotentialSample sample_gaussian(const EnsembleSpec& spec, const BoxSpec& box, std::uint64_t seed);
/// Dispatches on spec.kind.
PotentialSample sample_potential(const EnsembleSpec& spec, const BoxSpec& box, std::uint64_t seed);

/// Impurity positions drawn by sample_poisson for the same arguments (halo included).
std::vector<Point> poisson_impurities(const EnsembleSpec& spec, const BoxSpec& box, std::uint64_t seed);
/// Volume of the haloed window the Poisson impurities are drawn in.
double poisson_window_volume(const EnsembleSpec& spec, const BoxSpec& box);

/// V_n(x) = V(x) Θ(n - |V(x)|): values with |V| >= level become 0.
PotentialSample truncate(const PotentialSample& sample, double level);

struct MomentReport {
  double q = 0.0;
  double r = 0.0;
  int dim = 0;
  double lhs_estimate = 0.0;
  double lhs_stderr = 0.0;
  double rhs_bound = 0.0;
  int theta_used = 1;
  /// sup_l (E|μ|(Λ(l))^r)^{1/r}
  double measure_moment = 0.0;
  /// Σ_k (∫_{Λ(k)} |u|^q)^{1/q}
  double profile_sum = 0.0;
  std::size_t samples = 0;
  bool violated = false;
};

/// Monte Carlo check of the local moment bound
///   E[(∫_{Λ(j)} |V|^q)^{r/q}]^{1/r} <= 3^{d/q} sup_l E[|μ|(Λ(l))^r]^{1/r} Σ_k (∫_{Λ(k)} |u|^q)^{1/q}
/// for the convolution ensembles (Alloy, Poisson). The cell integral uses
/// `cell_resolution` sites per unit length. Gaussian specs are rejected.
MomentReport check_moment_bound(const EnsembleSpec& spec, int dim, double q, double r,
                                std::size_t samples, std::uint64_t seed, int cell_resolution = 4);

/// Σ_k (∫_{Λ(k)} |u|^q)^{1/q} by midpoint quadrature with `resolution` points per unit length.
double profile_cell_norm_sum(const Profile& u, int dim, double q, int resolution = 64);

/// Smallest integer θ with θ > d/4.
int theta_for_dim(int dim);

/// CSV with columns x0..x{d-1},value.
void write_csv(std::ostream& os, const PotentialSample& sample);

}  // namespace idslab
