#include "idslab/ids.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "idslab/error.hpp"
#include "idslab/format.hpp"
#include "idslab/measure.hpp"
#include "idslab/operator.hpp"
#include "idslab/parallel.hpp"
#include "idslab/rng.hpp"
#include "idslab/spectral.hpp"

namespace idslab {

namespace {

void check_settings(const RunSettings& s, const char* who) {
  if (s.realizations < 1) throw InvalidArgument(std::string(who) + ": realizations must be >= 1");
  if (s.energies.empty()) throw InvalidArgument(std::string(who) + ": empty energy grid");
  for (std::size_t i = 0; i < s.energies.size(); ++i) {
    if (!std::isfinite(s.energies[i])) throw InvalidArgument(std::string(who) + ": non-finite energy");
    if (i > 0 && !(s.energies[i] > s.energies[i - 1]))
      throw InvalidArgument(std::string(who) + ": energy grid must be strictly ascending");
  }
}

PotentialSample realize(const EnsembleSpec& ensemble, const BoxSpec& box, std::uint64_t seed) {
  PotentialSample s = sample_potential(ensemble, box, seed);
  if (ensemble.truncation_level) s = truncate(s, *ensemble.truncation_level);
  return s;
}

Spectrum spectrum_of(const BoxSpec& box, const MagneticField& field, const std::vector<double>& v) {
  return eigenvalues(build_hamiltonian(box, field, v));
}

std::vector<Spectrum> realization_spectra(const EnsembleSpec& ensemble, const BoxSpec& box,
                                          const MagneticField& field, const RunSettings& settings) {
  return map_indexed(settings.realizations, settings.workers, [&](std::size_t r) {
    return spectrum_of(box, field, realize(ensemble, box, realization_seed(settings.master_seed, r)).values);
  });
}

struct Moments {
  std::vector<double> mean, std_dev, std_error;
};

/// Column statistics of rows[r][i] in realization order.
Moments column_moments(const std::vector<std::vector<double>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t m = rows.front().size();
  Moments out{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
  for (std::size_t i = 0; i < m; ++i) {
    double sum = 0.0;
    for (const auto& row : rows) sum += row[i];
    const double mean = sum / static_cast<double>(r);
    double ss = 0.0;
    for (const auto& row : rows) ss += (row[i] - mean) * (row[i] - mean);
    out.mean[i] = mean;
    if (r > 1) {
      out.std_dev[i] = std::sqrt(ss / static_cast<double>(r - 1));
      out.std_error[i] = out.std_dev[i] / std::sqrt(static_cast<double>(r));
    }
  }
  return out;
}

IDSEstimate estimate_from_spectra(const std::vector<Spectrum>& spectra, const EnsembleSpec& ensemble,
                                  const BoxSpec& box, const RunSettings& settings) {
  IDSEstimate est{settings.energies, {}, {}, {}, box, ensemble, settings.realizations, settings.master_seed,
                  box.volume(), {}, 0.0, 0.0, {}, {}};
  std::vector<std::vector<double>> rows;
  rows.reserve(spectra.size());
  est.spectrum_min = spectra.front().min();
  est.spectrum_max = spectra.front().max();
  const double n = static_cast<double>(box.site_count());
  for (const Spectrum& s : spectra) {
    auto counts = count_below(s, settings.energies);
    std::vector<double> row(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) row[i] = static_cast<double>(counts[i]) / est.volume;
    for (std::size_t i = 0; i + 1 < counts.size(); ++i)
      if (static_cast<double>(counts[i + 1] - counts[i]) > 0.05 * n) est.jump_cells.push_back(i);
    est.spectrum_min = std::min(est.spectrum_min, s.min());
    est.spectrum_max = std::max(est.spectrum_max, s.max());
    est.counts.push_back(std::move(counts));
    rows.push_back(std::move(row));
  }
  std::sort(est.jump_cells.begin(), est.jump_cells.end());
  est.jump_cells.erase(std::unique(est.jump_cells.begin(), est.jump_cells.end()), est.jump_cells.end());
  if (!est.jump_cells.empty())
    est.warnings.push_back(std::to_string(est.jump_cells.size()) +
                           " grid cell(s) where a realization's count jumps by more than 5% of the site count;"
                           " these may contain discontinuity points of N");
  Moments mom = column_moments(rows);
  est.mean = std::move(mom.mean);
  est.std_dev = std::move(mom.std_dev);
  est.std_error = std::move(mom.std_error);
  return est;
}

/// Per energy: Σ_k g_E(λ_k) with g_E the Cauchy-smoothed I_E.
std::vector<double> smoothed_functional(const Spectrum& s, const std::vector<double>& energies, double eps) {
  std::vector<double> out(energies.size(), 0.0);
  for (std::size_t i = 0; i < energies.size(); ++i) {
    double sum = 0.0;
    for (double l : s.eigenvalues) sum += smoothed_indicator_value(energies[i], eps, l);
    out[i] = sum;
  }
  return out;
}

double sup_abs_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

ModelDims ModelDims::for_dim(int d) {
  if (d < 1) throw InvalidArgument("model dimension must be >= 1");
  ModelDims m;
  m.d = d;
  m.theta = theta_for_dim(d);
  if (d <= 3) {
    m.p_of_d = 2.0;
  } else if (d == 4) {
    m.p_of_d = 2.0;
    m.p_is_open_lower_bound = true;
  } else {
    m.p_of_d = 0.5 * d;
  }
  return m;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw InvalidArgument("uniform_grid: bounds must be finite");
  if (points == 0) throw InvalidArgument("uniform_grid: need at least one point");
  if (points == 1) return {lo};
  if (!(hi > lo)) throw InvalidArgument("uniform_grid: need lo < hi");
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  g.back() = hi;
  return g;
}

std::uint64_t realization_seed(std::uint64_t master_seed, std::size_t r) { return derive_seed(master_seed, r); }

std::vector<double> pilot_energy_grid(const EnsembleSpec& ensemble, const BoxSpec& box, const MagneticField& field,
                                      std::uint64_t master_seed, std::size_t points) {
  ensemble.validate();
  const Spectrum s = spectrum_of(box, field, realize(ensemble, box, realization_seed(master_seed, 0)).values);
  return uniform_grid(s.min() - 1.0, s.max() + 1.0, points);
}

IDSEstimate finite_volume_ids(const EnsembleSpec& ensemble, const BoxSpec& box, const MagneticField& field,
                              const RunSettings& settings) {
  check_settings(settings, "finite_volume_ids");
  ensemble.validate();
  return estimate_from_spectra(realization_spectra(ensemble, box, field, settings), ensemble, box, settings);
}

std::vector<std::size_t> window_sites(const BoxSpec& box, double window_fraction) {
  if (!(window_fraction > 0.0 && window_fraction <= 1.0))
    throw InvalidArgument("window_fraction must lie in (0, 1]");
  const int d = box.dim();
  SiteCoords lo{0, 0, 0}, len{1, 1, 1};
  for (int a = 0; a < d; ++a) {
    const int l = box.side(a);
    len[a] = std::clamp(static_cast<int>(std::lround(window_fraction * l)), 1, l);
    lo[a] = (l - len[a]) / 2;
  }
  std::vector<std::size_t> out;
  SiteCoords c{0, 0, 0};
  for (c[2] = 0; c[2] < len[2]; ++c[2])
    for (c[1] = 0; c[1] < len[1]; ++c[1])
      for (c[0] = 0; c[0] < len[0]; ++c[0]) {
        SiteCoords w{0, 0, 0};
        for (int a = 0; a < d; ++a) w[a] = lo[a] + c[a];
        out.push_back(box.index(w));
      }
  std::sort(out.begin(), out.end());
  return out;
}

IDSEstimate localized_ids(const EnsembleSpec& ensemble, const BoxSpec& big_box, double window_fraction,
                          const MagneticField& field, const RunSettings& settings) {
  check_settings(settings, "localized_ids");
  ensemble.validate();
  const auto window = window_sites(big_box, window_fraction);
  if (window.size() == big_box.site_count()) {
    // χ_Γ = 1: the trace of the projector is the eigenvalue count.
    return finite_volume_ids(ensemble, big_box, field, settings);
  }
  const double volume = static_cast<double>(window.size()) * big_box.cell_volume();

  struct Result {
    std::vector<double> row;
    std::vector<std::string> warnings;
    double lo, hi;
  };
  auto results = map_indexed(settings.realizations, settings.workers, [&](std::size_t r) {
    const auto v = realize(ensemble, big_box, realization_seed(settings.master_seed, r));
    const EigenDecomposition eig = eigen_decomposition(build_hamiltonian(big_box, field, v.values));
    const auto& lam = eig.spectrum.eigenvalues;
    const std::size_t n = lam.size();
    std::vector<double> weight(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      double w = 0.0;
      for (std::size_t i : window) w += abs2_of(eig.vectors(k, i));
      weight[k] = w;
    }
    Result res{std::vector<double>(settings.energies.size(), 0.0), {}, lam.front(), lam.back()};
    const double tol = kTieTolerance * eig.spectrum.scale;
    auto near = [&](double e) {
      auto it = std::lower_bound(lam.begin(), lam.end(), e - tol);
      return it != lam.end() && *it <= e + tol;
    };
    for (std::size_t i = 0; i < settings.energies.size(); ++i) {
      double e = settings.energies[i];
      if (near(e)) {
        const double shift = 1e-9 * eig.spectrum.scale;
        res.warnings.push_back("E = " + format_double(e) + " is within the tie tolerance of an eigenvalue; shifted by " +
                               format_double(shift));
        e += shift;
        if (near(e)) throw NearEigenvalueError("localized_ids: E = " + format_double(e) +
                                                   " still hits an eigenvalue after the guard shift",
                                               shift);
      }
      double sum = 0.0;
      for (std::size_t k = 0; k < n && lam[k] < e; ++k) sum += weight[k];
      res.row[i] = sum / volume;
    }
    return res;
  });

  IDSEstimate est{settings.energies, {}, {}, {}, big_box, ensemble, settings.realizations, settings.master_seed,
                  volume, {}, results.front().lo, results.front().hi, {}, {}};
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < results.size(); ++r) {
    est.spectrum_min = std::min(est.spectrum_min, results[r].lo);
    est.spectrum_max = std::max(est.spectrum_max, results[r].hi);
    for (auto& w : results[r].warnings) est.warnings.push_back("realization " + std::to_string(r) + ": " + w);
    rows.push_back(std::move(results[r].row));
  }
  Moments mom = column_moments(rows);
  est.mean = std::move(mom.mean);
  est.std_dev = std::move(mom.std_dev);
  est.std_error = std::move(mom.std_error);
  return est;
}

std::size_t BcGapTable::total_violations() const noexcept {
  std::size_t t = 0;
  for (const auto& r : rows) t += r.sandwich_violations;
  return t;
}

bool BcGapTable::strictly_decreasing() const noexcept {
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i].sup_gap < rows[i - 1].sup_gap)) return false;
  return true;
}

BcGapTable bc_gap(const EnsembleSpec& ensemble, const std::vector<BoxSpec>& boxes, const MagneticField& field,
                  const RunSettings& settings, double eps) {
  check_settings(settings, "bc_gap");
  ensemble.validate();
  if (boxes.empty()) throw InvalidArgument("bc_gap: no boxes");
  if (!(eps > 0.0)) throw InvalidArgument("bc_gap: smoothing width must be positive");
  BcGapTable table;
  table.smoothing_eps = eps;
  for (const BoxSpec& geometry : boxes) {
    const BoxSpec dbox = geometry.with_bc(BoundaryCondition::Dirichlet);
    const BoxSpec nbox = geometry.with_bc(BoundaryCondition::Neumann);
    struct Pair {
      Spectrum d, n;
    };
    // Common random numbers: one potential feeds both boundary conditions.
    auto pairs = map_indexed(settings.realizations, settings.workers, [&](std::size_t r) {
      const auto v = realize(ensemble, dbox, realization_seed(settings.master_seed, r));
      return Pair{spectrum_of(dbox, field, v.values), spectrum_of(nbox, field, v.values)};
    });
    std::vector<Spectrum> ds, ns;
    for (auto& p : pairs) {
      ds.push_back(std::move(p.d));
      ns.push_back(std::move(p.n));
    }
    BcGapRow row{dbox, 0.0, 0.0, 0, estimate_from_spectra(ds, ensemble, dbox, settings),
                 estimate_from_spectra(ns, ensemble, nbox, settings)};
    row.sup_gap = sup_abs_difference(row.neumann.mean, row.dirichlet.mean);
    for (std::size_t r = 0; r < settings.realizations; ++r)
      for (std::size_t i = 0; i < settings.energies.size(); ++i)
        if (row.dirichlet.counts[r][i] > row.neumann.counts[r][i]) ++row.sandwich_violations;
    std::vector<double> diff(settings.energies.size(), 0.0);
    for (std::size_t r = 0; r < settings.realizations; ++r) {
      const auto fd = smoothed_functional(ds[r], settings.energies, eps);
      const auto fn = smoothed_functional(ns[r], settings.energies, eps);
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] += fn[i] - fd[i];
    }
    double worst = 0.0;
    for (double x : diff) worst = std::max(worst, std::abs(x) / static_cast<double>(settings.realizations));
    row.smoothed_gap = worst / dbox.volume();
    table.rows.push_back(std::move(row));
  }
  return table;
}

TruncationTable truncation_sweep(const EnsembleSpec& ensemble, const BoxSpec& box, const MagneticField& field,
                                 const std::vector<double>& levels, const RunSettings& settings, double eps) {
  check_settings(settings, "truncation_sweep");
  ensemble.validate();
  if (levels.empty()) throw InvalidArgument("truncation_sweep: no truncation levels");
  for (double l : levels)
    if (!(l > 0.0)) throw InvalidArgument("truncation_sweep: truncation levels must be positive");
  if (!(eps > 0.0)) throw InvalidArgument("truncation_sweep: smoothing width must be positive");

  struct Result {
    std::vector<Spectrum> spectra;  // [0] untruncated, [1 + j] level j
    double max_abs;
  };
  auto results = map_indexed(settings.realizations, settings.workers, [&](std::size_t r) {
    const auto v = realize(ensemble, box, realization_seed(settings.master_seed, r));
    Result res{{spectrum_of(box, field, v.values)}, v.max_abs()};
    for (double l : levels) res.spectra.push_back(spectrum_of(box, field, truncate(v, l).values));
    return res;
  });

  TruncationTable table;
  table.smoothing_eps = eps;
  const std::size_t m = settings.energies.size();
  auto mean_counts = [&](std::size_t slot) {
    std::vector<double> acc(m, 0.0);
    for (const auto& res : results) {
      const auto c = count_below(res.spectra[slot], settings.energies);
      for (std::size_t i = 0; i < m; ++i) acc[i] += static_cast<double>(c[i]);
    }
    for (double& a : acc) a /= static_cast<double>(results.size()) * box.volume();
    return acc;
  };
  auto mean_smoothed = [&](std::size_t slot) {
    std::vector<double> acc(m, 0.0);
    for (const auto& res : results) {
      const auto f = smoothed_functional(res.spectra[slot], settings.energies, eps);
      for (std::size_t i = 0; i < m; ++i) acc[i] += f[i];
    }
    for (double& a : acc) a /= static_cast<double>(results.size()) * box.volume();
    return acc;
  };
  for (const auto& res : results) table.realized_max_abs = std::max(table.realized_max_abs, res.max_abs);
  const auto base = mean_counts(0);
  const auto base_smooth = mean_smoothed(0);
  for (std::size_t j = 0; j < levels.size(); ++j) {
    TruncationRow row;
    row.level = levels[j];
    row.sup_deviation = sup_abs_difference(mean_counts(j + 1), base);
    row.smoothed_deviation = sup_abs_difference(mean_smoothed(j + 1), base_smooth);
    table.rows.push_back(row);
  }
  return table;
}

TightnessReport tightness_check(const std::vector<IDSEstimate>& estimates, const std::vector<double>& energies) {
  if (estimates.empty()) throw InvalidArgument("tightness_check: no estimates");
  if (energies.empty()) throw InvalidArgument("tightness_check: no energies");
  TightnessReport rep;
  rep.energies = energies;
  const ModelDims dims = ModelDims::for_dim(estimates.front().box.dim());
  rep.exponent_bound = dims.lifshits_exponent();
  std::vector<double> xs, ys;
  for (double e : energies) {
    if (!(e < 0.0)) throw InvalidArgument("tightness_check: energies must be negative, got " + format_double(e));
    double m = 0.0;
    for (const auto& est : estimates) {
      auto it = std::find_if(est.energies.begin(), est.energies.end(), [e](double g) {
        return std::abs(g - e) <= 1e-12 * std::max(1.0, std::abs(e));
      });
      if (it == est.energies.end())
        throw InvalidArgument("tightness_check: energy " + format_double(e) + " is not on an estimate's grid");
      m = std::max(m, est.mean[static_cast<std::size_t>(it - est.energies.begin())]);
    }
    rep.max_values.push_back(m);
    if (m > 0.0) {
      xs.push_back(std::log(-e));
      ys.push_back(std::log(m));
    } else {
      rep.excluded_energies.push_back(e);
    }
  }
  rep.fit_points = xs.size();
  if (xs.size() >= 2) {
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    rep.fitted_slope = sxx > 0.0 ? sxy / sxx : 0.0;
  } else {
    rep.fitted_slope = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

double weyl_constant(int dim) {
  if (dim < 1) throw InvalidArgument("weyl_constant: dimension must be >= 1");
  const double half = 0.5 * dim;
  return 1.0 / (std::tgamma(half + 1.0) * std::pow(2.0 * std::numbers::pi, half));
}

double faithful_band_edge(double spacing) { return 0.2 / (spacing * spacing); }

namespace {

std::size_t robust_inertia_count(const HermitianOperator& op, double e) {
  try {
    return count_below_inertia(op, e);
  } catch (const NearEigenvalueError& err) {
    return count_below_inertia(op, e + err.suggested_shift());
  }
}

}  // namespace

std::vector<WeylRow> weyl_check(int dim, const std::vector<double>& physical_sides, const std::vector<double>& spacings,
                                const std::vector<double>& energies) {
  if (physical_sides.empty() || spacings.empty() || energies.empty())
    throw InvalidArgument("weyl_check: sides, spacings and energies must be non-empty");
  const double c = weyl_constant(dim);
  std::vector<WeylRow> rows;
  for (double lp : physical_sides)
    for (double h : spacings) {
      if (!(lp > 0.0) || !(h > 0.0)) throw InvalidArgument("weyl_check: sides and spacings must be positive");
      const int l = static_cast<int>(std::lround(lp / h));
      const BoxSpec dbox = BoxSpec::cube(dim, l, h, BoundaryCondition::Dirichlet);
      const BoxSpec nbox = dbox.with_bc(BoundaryCondition::Neumann);
      const std::vector<double> zero(dbox.site_count(), 0.0);
      const auto field = MagneticField::zero(dim);
      const HermitianOperator hd = build_hamiltonian(dbox, field, zero);
      const HermitianOperator hn = build_hamiltonian(nbox, field, zero);
      for (double e : energies) {
        if (!(e > 0.0)) throw InvalidArgument("weyl_check: energies must be positive");
        WeylRow row;
        row.physical_side = lp;
        row.spacing = h;
        row.energy = e;
        row.count_dirichlet = robust_inertia_count(hd, e);
        row.count_neumann = robust_inertia_count(hn, e);
        const double scale = dbox.volume() * std::pow(e, 0.5 * dim) * c;
        row.ratio_dirichlet = static_cast<double>(row.count_dirichlet) / scale;
        row.ratio_neumann = static_cast<double>(row.count_neumann) / scale;
        row.ratio = 0.5 * (row.ratio_dirichlet + row.ratio_neumann);
        row.faithful = e <= faithful_band_edge(h);
        rows.push_back(row);
      }
    }
  return rows;
}

std::vector<GaussianTailRow> gaussian_tail_check(const Covariance& covariance, int dim, const std::vector<int>& sides,
                                                 double spacing, const MagneticField& field, BoundaryCondition bc,
                                                 const RunSettings& settings) {
  if (sides.empty()) throw InvalidArgument("gaussian_tail_check: no box sides");
  const EnsembleSpec ensemble = EnsembleSpec::gaussian(covariance);
  const double reference = -1.0 / (2.0 * covariance.c0);
  std::vector<GaussianTailRow> rows;
  for (int side : sides) {
    const BoxSpec box = BoxSpec::cube(dim, side, spacing, bc);
    const IDSEstimate est = finite_volume_ids(ensemble, box, field, settings);
    for (std::size_t i = 0; i < est.energies.size(); ++i) {
      GaussianTailRow row;
      row.side = side;
      row.energy = est.energies[i];
      row.mean = est.mean[i];
      row.std_error = est.std_error[i];
      row.reference = reference;
      if (row.mean > 0.0 && row.energy != 0.0) {
        row.measured = std::log(row.mean) / (row.energy * row.energy);
      } else {
        row.excluded = true;
        row.measured = std::numeric_limits<double>::quiet_NaN();
      }
      rows.push_back(row);
    }
  }
  return rows;
}

double landau_reference(double b, double energy) {
  if (!(b > 0.0)) throw InvalidArgument("landau_reference: B must be positive");
  if (energy < 0.5 * b) return 0.0;
  const double levels = std::floor(energy / b - 0.5) + 1.0;
  return b / (2.0 * std::numbers::pi) * levels;
}

LandauReport landau_cluster_check(int side_x, int side_y, double spacing, double b) {
  if (!(b > 0.0)) throw InvalidArgument("landau_cluster_check: B must be positive");
  const BoxSpec box({side_x, side_y}, spacing, BoundaryCondition::Periodic);
  LandauReport rep;
  rep.requested_b = b;
  rep.volume = box.volume();
  const double quantum = 2.0 * std::numbers::pi / rep.volume;
  rep.flux_quanta = std::lround(b / quantum);
  if (rep.flux_quanta < 1)
    throw InvalidArgument("landau_cluster_check: box too small to hold one flux quantum at this B");
  rep.effective_b = quantum * static_cast<double>(rep.flux_quanta);
  const std::vector<double> zero(box.site_count(), 0.0);
  const Spectrum s = eigenvalues(build_hamiltonian(box, MagneticField::planar(2, rep.effective_b), zero));
  rep.eigenvalues = s.eigenvalues;
  std::vector<double> cluster;
  for (double e : s.eigenvalues)
    if (e < rep.effective_b) cluster.push_back(e);
  rep.cluster_count = cluster.size();
  rep.expected_count = rep.effective_b * rep.volume / (2.0 * std::numbers::pi);
  if (!cluster.empty()) {
    rep.cluster_mean = std::accumulate(cluster.begin(), cluster.end(), 0.0) / static_cast<double>(cluster.size());
    rep.cluster_spread = cluster.back() - cluster.front();
  }
  rep.reference_step = landau_reference(rep.effective_b, rep.effective_b);
  rep.measured_step = static_cast<double>(rep.cluster_count) / rep.volume;
  return rep;
}

SupportReport support_spectrum_check(const EnsembleSpec& ensemble, const BoxSpec& box, const MagneticField& field,
                                     const RunSettings& settings) {
  check_settings(settings, "support_spectrum_check");
  ensemble.validate();
  const auto spectra = realization_spectra(ensemble, box, field, settings);
  const IDSEstimate est = estimate_from_spectra(spectra, ensemble, box, settings);
  const auto& grid = settings.energies;
  const std::size_t cells = grid.size() - 1;

  SupportReport rep;
  rep.energies = grid;
  rep.mean = est.mean;
  std::vector<bool> growing(cells, false);
  for (std::size_t i = 0; i < cells; ++i) {
    growing[i] = est.mean[i + 1] > est.mean[i];
    if (growing[i]) ++rep.growth_cells;
  }
  auto cell_of = [&](double e) -> std::ptrdiff_t {
    if (e < grid.front() || e >= grid.back()) return -1;
    auto it = std::upper_bound(grid.begin(), grid.end(), e);
    return (it - grid.begin()) - 1;
  };
  auto growing_near = [&](std::ptrdiff_t c) {
    for (std::ptrdiff_t k = c - 1; k <= c + 1; ++k)
      if (k >= 0 && k < static_cast<std::ptrdiff_t>(cells) && growing[static_cast<std::size_t>(k)]) return true;
    return false;
  };
  double lo = spectra.front().min(), hi = spectra.front().max();
  for (const Spectrum& s : spectra) {
    lo = std::min(lo, s.min());
    hi = std::max(hi, s.max());
    std::vector<bool> hit(cells, false);
    for (double e : s.eigenvalues) {
      const auto c = cell_of(e);
      if (c < 0 || !growing_near(c)) {
        ++rep.eigenvalues_outside_growth;
        continue;
      }
      hit[static_cast<std::size_t>(c)] = true;
    }
    std::size_t uncovered = 0;
    for (std::size_t i = 0; i < cells; ++i) {
      if (!growing[i]) continue;
      const bool near = hit[i] || (i > 0 && hit[i - 1]) || (i + 1 < cells && hit[i + 1]);
      if (!near) ++uncovered;
    }
    rep.uncovered_growth_cells.push_back(uncovered);
  }
  for (std::size_t i = 0; i < cells;) {
    if (growing[i] || grid[i] < lo || grid[i + 1] > hi) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < cells && !growing[j] && grid[j + 1] <= hi) ++j;
    rep.gaps.emplace_back(grid[i], grid[j]);
    i = j;
  }
  return rep;
}

}  // namespace idslab
