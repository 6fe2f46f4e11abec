#pragma once

#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "idslab/spectral.hpp"

namespace idslab {

/// Finite sum of weighted point masses on the real line.
class AtomicMeasure {
 public:
  struct Atom {
    double location;
    double weight;
    bool operator==(const Atom&) const = default;
  };

  AtomicMeasure() = default;
  /// Sorts by location and merges equal locations. Throws InvalidArgument on a
  /// non-finite location or a non-positive weight.
  explicit AtomicMeasure(std::vector<Atom> atoms);

  /// Eigenvalue counting measure with every eigenvalue weighted by `weight`.
  static AtomicMeasure from_spectrum(const Spectrum& spectrum, double weight = 1.0);
  static AtomicMeasure dirac(double location, double weight = 1.0);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  bool empty() const noexcept { return atoms_.empty(); }
  double total_mass() const noexcept;

  /// μ(]-∞, E[).
  double distribution_function(double energy) const;

  AtomicMeasure scaled(double factor) const;

  std::string to_csv() const;
  std::string to_json() const;
  static AtomicMeasure from_json(const std::string& text);

  bool operator==(const AtomicMeasure&) const = default;

 private:
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;  // cumulative_[i] = Σ_{k<i} weight_k
};

using RealFunction = std::function<double(double)>;

/// Σ weight f(location). Throws InvalidArgument if f is non-finite at an atom.
double integrate(const AtomicMeasure& mu, const RealFunction& f);

/// ∫ μ(dE) / |E - z|^p. Throws InvalidArgument for real z or p <= 1.
double stieltjes(const AtomicMeasure& mu, std::complex<double> z, double p);

/// Approximate identity E ↦ Υ_p ε^{p-1} / |E - iε|^p with (Υ_p)^{-1} = ∫ dξ / |ξ - i|^p.
class SmoothingKernel {
 public:
  /// Throws InvalidArgument for p <= 1 or eps <= 0.
  SmoothingKernel(double p, double eps);

  double operator()(double energy) const noexcept;
  double p() const noexcept { return p_; }
  double eps() const noexcept { return eps_; }
  double upsilon() const noexcept { return upsilon_; }

 private:
  double p_;
  double eps_;
  double upsilon_;
};

/// Υ_p, computed by adaptive Simpson quadrature of (1 + ξ^2)^{-p/2} on [-T, T] with the
/// tail 2∫_T^∞ ξ^{-p} dξ below 1e-10.
double upsilon(double p);

/// Adaptive Simpson quadrature on [a, b] to absolute tolerance `tol`.
double adaptive_simpson(const RealFunction& f, double a, double b, double tol, int max_depth = 60);

/// Continuous indicator I_E: 1 below E, linear ramp down to 0 on [E, E+1], 0 above.
RealFunction indicator_hat(double energy);
double indicator_hat_value(double energy, double x) noexcept;

/// I_E convolved with the Cauchy kernel (p = 2) of width eps, in closed form.
double smoothed_indicator_value(double energy, double eps, double x) noexcept;

struct StieltjesProbe {
  std::complex<double> z;
  double p;
};

/// Default probe set {i, 1+i, -1+i, 2i} with p = 2.
std::vector<StieltjesProbe> default_probe_grid();

/// max over probes of |μ̃(z,p) - ν̃(z,p)|.
double vague_distance(const AtomicMeasure& mu, const AtomicMeasure& nu,
                      const std::vector<StieltjesProbe>& grid);

/// For each E: max of μ_k(]-∞,E[) over the later half of the sequence
/// (k >= size/2), a finite stand-in for limsup_k.
std::vector<double> tightness_profile(const std::vector<AtomicMeasure>& sequence,
                                      const std::vector<double>& energies);

}  // namespace idslab
