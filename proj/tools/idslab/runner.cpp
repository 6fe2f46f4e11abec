#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "idslab/format.hpp"
#include "idslab/ids.hpp"
#include "idslab/measure.hpp"
#include "idslab/potential.hpp"
#include "manifest.hpp"
#include "registry.hpp"

namespace idslab::app {

using nlohmann::json;

namespace {

struct Context {
  const ExperimentConfig& config;
  std::filesystem::path dir;
  unsigned workers;
  std::vector<std::string> files;
  std::map<std::string, Check> checks;
  json results = json::object();
  std::vector<std::string> warnings;

  RunSettings settings(std::vector<double> energies) const {
    return {std::move(energies), config.run.realizations, config.run.master_seed, workers};
  }

  void check(const std::string& name, bool ok, std::string detail, bool warn_only = false) {
    checks[name] = {ok ? "pass" : (warn_only ? "warn" : "fail"), std::move(detail)};
  }

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(dir / name, std::ios::binary);
    out << content;
    if (!out) throw Error("cannot write " + (dir / name).string());
    if (std::find(files.begin(), files.end(), name) == files.end()) files.push_back(name);
  }
};

std::string fmt(double x) { return format_double(x); }

/// Short form for human-readable check details.
std::string brief(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

/// Long-format rows: experiment,box,bc,E,mean,stderr.
class LongCsv {
 public:
  explicit LongCsv(std::string experiment) : experiment_(std::move(experiment)) {
    os_ << "experiment,box,bc,E,mean,stderr\n";
  }
  void add(const std::string& box, const std::string& bc, double e, double mean, double se) {
    os_ << experiment_ << ',' << box << ',' << bc << ',' << fmt(e) << ',' << fmt(mean) << ',' << fmt(se) << '\n';
  }
  void add(const IDSEstimate& est, const std::string& label) {
    for (std::size_t i = 0; i < est.energies.size(); ++i)
      add(label, std::string(to_string(est.box.bc())), est.energies[i], est.mean[i], est.std_error[i]);
  }
  std::string str() const { return os_.str(); }

 private:
  std::string experiment_;
  std::ostringstream os_;
};

const json kLongColumns = {
    {"experiment", "experiment name"},
    {"box", "lattice sides, e.g. 16x16"},
    {"bc", "boundary condition"},
    {"E", "energy"},
    {"mean", "realization mean of the reported quantity (N(E)/|Lambda| for IDS curves)"},
    {"stderr", "standard error of the mean over realizations"},
};

bool monotone_and_bounded(const IDSEstimate& est) {
  const double cap = static_cast<double>(est.box.site_count()) / est.volume * (1.0 + 1e-12);
  for (std::size_t i = 0; i < est.mean.size(); ++i) {
    if (est.mean[i] < 0.0 || est.mean[i] > cap) return false;
    if (i > 0 && est.mean[i] < est.mean[i - 1]) return false;
  }
  return true;
}

std::size_t nearest_index(const std::vector<double>& grid, double e) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (std::abs(grid[i] - e) < std::abs(grid[best] - e)) best = i;
  return best;
}

std::vector<int> cube_sides(int d, int side) { return std::vector<int>(static_cast<std::size_t>(d), side); }

json estimate_json(const IDSEstimate& est) {
  return {{"box", box_label(est.box)},
          {"bc", std::string(to_string(est.box.bc()))},
          {"volume", est.volume},
          {"realizations", est.realizations},
          {"spectrum_min", est.spectrum_min},
          {"spectrum_max", est.spectrum_max},
          {"jump_cells", est.jump_cells},
          {"warnings", est.warnings}};
}

void note_jumps(Context& ctx, const IDSEstimate& est) {
  if (!est.jump_cells.empty())
    ctx.check("jump_cells_" + box_label(est.box) + "_" + std::string(to_string(est.box.bc())), false,
              std::to_string(est.jump_cells.size()) +
                  " grid cell(s) where a count jumps by more than 5% of the sites; N may be discontinuous there",
              true);
}

void run_ids(Context& ctx) {
  const auto& c = ctx.config;
  const MagneticField field = field_of(c);
  LongCsv csv(c.experiment);
  json list = json::array();
  for (auto bc : c.model.bcs) {
    const BoxSpec box = box_of(c, bc);
    const auto energies = resolve_energies(c, box);
    const IDSEstimate est = c.params.window_fraction < 1.0
                                ? localized_ids(c.ensemble, box, c.params.window_fraction, field, ctx.settings(energies))
                                : finite_volume_ids(c.ensemble, box, field, ctx.settings(energies));
    csv.add(est, box_label(box));
    json j = estimate_json(est);
    j["window_fraction"] = c.params.window_fraction;
    list.push_back(j);
    ctx.check("monotone_" + std::string(to_string(bc)), monotone_and_bounded(est),
              "N(E)/|Lambda| nondecreasing, >= 0 and <= n/|Lambda|");
    note_jumps(ctx, est);
    for (const auto& w : est.warnings) ctx.warnings.push_back(w);
  }
  if (c.params.window_fraction < 1.0)
    ctx.warnings.push_back("localized trace: the box stands in for the infinite-volume operator");
  ctx.results["estimates"] = list;
  ctx.write("results.csv", csv.str());
}

void run_bc_gap(Context& ctx) {
  const auto& c = ctx.config;
  std::vector<BoxSpec> boxes;
  for (int s : c.params.sweep_sides)
    boxes.emplace_back(cube_sides(c.model.d, s), c.model.spacing, BoundaryCondition::Dirichlet);
  const auto energies = resolve_energies(c, boxes.back());
  const BcGapTable table = bc_gap(c.ensemble, boxes, field_of(c), ctx.settings(energies), c.params.smoothing_eps);

  LongCsv csv(c.experiment);
  std::ostringstream gap;
  gap << "box,sites,sup_gap,smoothed_gap,sandwich_violations,midpoint_E,std_dirichlet,std_neumann\n";
  json rows = json::array();
  std::vector<double> mid_std;
  for (const auto& row : table.rows) {
    csv.add(row.dirichlet, box_label(row.box));
    csv.add(row.neumann, box_label(row.box));
    const double mid = 0.5 * (row.dirichlet.spectrum_min + row.dirichlet.spectrum_max);
    const std::size_t k = nearest_index(energies, mid);
    mid_std.push_back(row.dirichlet.std_dev[k]);
    gap << box_label(row.box) << ',' << row.box.site_count() << ',' << fmt(row.sup_gap) << ','
        << fmt(row.smoothed_gap) << ',' << row.sandwich_violations << ',' << fmt(energies[k]) << ','
        << fmt(row.dirichlet.std_dev[k]) << ',' << fmt(row.neumann.std_dev[k]) << '\n';
    rows.push_back({{"box", box_label(row.box)},
                    {"sup_gap", row.sup_gap},
                    {"smoothed_gap", row.smoothed_gap},
                    {"sandwich_violations", row.sandwich_violations},
                    {"midpoint_energy", energies[k]},
                    {"std_dirichlet", row.dirichlet.std_dev[k]}});
    note_jumps(ctx, row.dirichlet);
    note_jumps(ctx, row.neumann);
  }
  ctx.results["rows"] = rows;
  ctx.results["smoothing_eps"] = table.smoothing_eps;
  ctx.check("sandwich", table.total_violations() == 0,
            std::to_string(table.total_violations()) + " grid points with N_D > N_N over all seeds");
  ctx.check("gap_decreasing", table.strictly_decreasing(), "sup gap strictly decreasing along the sweep");
  const std::size_t m = table.rows.size();
  const double ratio = table.rows[m - 1].sup_gap / table.rows[m - 2].sup_gap;
  const double lo = 0.3, hi = 0.8;
  ctx.results["gap_ratio"] = ratio;
  ctx.check("gap_ratio", ratio >= lo && ratio <= hi,
            "gap(last)/gap(previous) = " + brief(ratio) + ", expected in [0.3, 0.8]");
  const double factor = mid_std[m - 2] / mid_std[m - 1];
  ctx.results["self_averaging_factor"] = factor;
  ctx.check("self_averaging", factor >= 1.4 && factor <= 3.5,
            "midpoint std ratio previous/last = " + brief(factor) + ", expected in [1.4, 3.5]");
  ctx.write("results.csv", csv.str());
  ctx.write("gap.csv", gap.str());
}

void run_truncation(Context& ctx) {
  const auto& c = ctx.config;
  const BoxSpec box = box_of(c, c.model.bcs.front());
  const auto energies = resolve_energies(c, box);
  const TruncationTable t =
      truncation_sweep(c.ensemble, box, field_of(c), c.params.levels, ctx.settings(energies), c.params.smoothing_eps);
  std::ostringstream os;
  os << "level,sup_deviation,smoothed_deviation\n";
  LongCsv csv(c.experiment);
  json rows = json::array();
  bool decreasing = true, zero_above = true;
  for (std::size_t j = 0; j < t.rows.size(); ++j) {
    const auto& r = t.rows[j];
    os << fmt(r.level) << ',' << fmt(r.sup_deviation) << ',' << fmt(r.smoothed_deviation) << '\n';
    csv.add(box_label(box), std::string(to_string(box.bc())), r.level, r.sup_deviation, 0.0);
    rows.push_back({{"level", r.level}, {"sup_deviation", r.sup_deviation}, {"smoothed_deviation", r.smoothed_deviation}});
    if (r.level > t.realized_max_abs && r.sup_deviation != 0.0) zero_above = false;
    // Once the level exceeds every |V| the deviation is identically 0 and cannot decrease further.
    if (j > 0 && !(r.sup_deviation < t.rows[j - 1].sup_deviation) &&
        !(t.rows[j - 1].level > t.realized_max_abs && r.sup_deviation == 0.0))
      decreasing = false;
  }
  ctx.results["rows"] = rows;
  ctx.results["realized_max_abs"] = t.realized_max_abs;
  ctx.check("deviation_decreasing", decreasing, "sup deviation strictly decreasing until it reaches 0");
  ctx.check("zero_above_max", zero_above, "deviation exactly 0 for levels above max|V| = " + brief(t.realized_max_abs));
  ctx.write("results.csv", csv.str());
  ctx.write("truncation.csv", os.str());
}

void run_tightness(Context& ctx) {
  const auto& c = ctx.config;
  const auto& energies = c.run.energies.values;
  const MagneticField field = field_of(c);
  const auto bc = c.model.bcs.front();
  std::vector<IDSEstimate> ests;
  LongCsv csv(c.experiment);
  for (int s : c.params.sweep_sides) {
    const BoxSpec box(cube_sides(c.model.d, s), c.model.spacing, bc);
    ests.push_back(finite_volume_ids(c.ensemble, box, field, ctx.settings(energies)));
    csv.add(ests.back(), box_label(box));
  }
  const TightnessReport rep = tightness_check(ests, energies);
  std::ostringstream os;
  os << "E,max_value,excluded\n";
  for (std::size_t i = 0; i < rep.energies.size(); ++i)
    os << fmt(rep.energies[i]) << ',' << fmt(rep.max_values[i]) << ',' << (rep.max_values[i] > 0.0 ? 0 : 1) << '\n';
  ctx.results["fitted_slope"] = rep.fit_points >= 2 ? json(rep.fitted_slope) : json(nullptr);
  ctx.results["fit_points"] = rep.fit_points;
  ctx.results["exponent_bound"] = rep.exponent_bound;
  ctx.results["excluded_energies"] = rep.excluded_energies;
  ctx.results["note"] = "only the exponent is checked; the prefactor of the bound is not computed";
  const double slack = c.params.tolerance > 0.0 ? c.params.tolerance : 0.3;
  if (rep.fit_points >= 2)
    ctx.check("slope", rep.fitted_slope <= rep.exponent_bound + slack,
              "fitted slope " + brief(rep.fitted_slope) + " vs bound " + brief(rep.exponent_bound) + " + " + brief(slack));
  else
    ctx.check("slope", false, "fewer than two energies with non-zero N; slope not fitted", true);
  if (!rep.excluded_energies.empty())
    ctx.check("excluded_energies", false, std::to_string(rep.excluded_energies.size()) + " energies with N = 0 excluded",
              true);
  if (c.ensemble.nonnegative() && field.is_zero() && bc == BoundaryCondition::Dirichlet) {
    std::size_t bad = 0;
    for (const auto& est : ests)
      for (std::size_t i = 0; i < est.energies.size(); ++i)
        if (est.energies[i] < 0.0)
          for (const auto& counts : est.counts) bad += counts[i] > 0 ? 1 : 0;
    ctx.check("nonnegative_zero", bad == 0, std::to_string(bad) + " (realization, E < 0) pairs with N > 0");
  }
  ctx.write("results.csv", csv.str());
  ctx.write("tightness.csv", os.str());
}

void run_weyl(Context& ctx) {
  const auto& c = ctx.config;
  const auto rows = weyl_check(c.model.d, c.params.physical_sides, c.params.spacings, c.run.energies.values);
  const double tol = c.params.tolerance > 0.0 ? c.params.tolerance : 0.1;
  std::ostringstream os;
  os << "physical_side,spacing,E,count_dirichlet,count_neumann,ratio_dirichlet,ratio_neumann,ratio,faithful\n";
  LongCsv csv(c.experiment);
  bool ok = true;
  std::size_t unfaithful = 0;
  for (const auto& r : rows) {
    os << fmt(r.physical_side) << ',' << fmt(r.spacing) << ',' << fmt(r.energy) << ',' << r.count_dirichlet << ','
       << r.count_neumann << ',' << fmt(r.ratio_dirichlet) << ',' << fmt(r.ratio_neumann) << ',' << fmt(r.ratio) << ','
       << (r.faithful ? 1 : 0) << '\n';
    const int l = static_cast<int>(std::lround(r.physical_side / r.spacing));
    csv.add(box_label(BoxSpec(cube_sides(c.model.d, l), r.spacing, BoundaryCondition::Dirichlet)), "dirichlet+neumann",
            r.energy, r.ratio, 0.0);
    if (r.faithful)
      ok = ok && std::abs(r.ratio - 1.0) <= tol;
    else
      ++unfaithful;
  }
  ctx.results["weyl_constant"] = weyl_constant(c.model.d);
  ctx.check("weyl_ratio", ok, "D/N-averaged E^{-d/2} N(E) / Weyl constant within " + brief(tol) + " of 1");
  if (unfaithful > 0)
    ctx.check("band_edge", false, std::to_string(unfaithful) + " row(s) above the band edge 0.2/h^2, not checked", true);
  ctx.write("results.csv", csv.str());
  ctx.write("weyl.csv", os.str());
}

void run_gaussian_tail(Context& ctx) {
  const auto& c = ctx.config;
  const auto rows = gaussian_tail_check(c.ensemble.covariance, c.model.d, c.params.sweep_sides, c.model.spacing,
                                        field_of(c), c.model.bcs.front(), ctx.settings(c.run.energies.values));
  const double factor = c.params.tolerance > 0.0 ? c.params.tolerance : 1.6;
  std::ostringstream os;
  os << "side,E,mean,stderr,measured,reference,excluded\n";
  LongCsv csv(c.experiment);
  const std::string bc(to_string(c.model.bcs.front()));
  for (const auto& r : rows) {
    os << r.side << ',' << fmt(r.energy) << ',' << fmt(r.mean) << ',' << fmt(r.std_error) << ','
       << (r.excluded ? std::string("nan") : fmt(r.measured)) << ',' << fmt(r.reference) << ',' << (r.excluded ? 1 : 0)
       << '\n';
    csv.add(box_label(BoxSpec(cube_sides(c.model.d, r.side), c.model.spacing, c.model.bcs.front())), bc, r.energy,
            r.mean, r.std_error);
  }
  // Deepest energy of the largest box with data.
  const int largest = c.params.sweep_sides.back();
  const GaussianTailRow* probe = nullptr;
  std::size_t excluded = 0;
  for (const auto& r : rows) {
    if (r.excluded) ++excluded;
    if (r.side == largest && !r.excluded && (!probe || r.energy < probe->energy)) probe = &r;
  }
  if (probe) {
    const double q = probe->measured / probe->reference;
    ctx.results["probe_energy"] = probe->energy;
    ctx.results["probe_measured"] = probe->measured;
    ctx.results["probe_reference"] = probe->reference;
    ctx.check("tail_ratio", q >= 1.0 / factor && q <= factor,
              "E^-2 log N at E = " + brief(probe->energy) + " is " + brief(probe->measured) + ", reference " +
                  brief(probe->reference) + ", allowed factor " + brief(factor));
  } else {
    ctx.check("tail_ratio", false, "no energy with non-zero N in the largest box", true);
  }
  if (excluded > 0)
    ctx.check("excluded_energies", false, std::to_string(excluded) + " (box, E) pairs with N = 0 (tail undersampled)",
              true);
  ctx.results["note"] = "asymptotic law; agreement at accessible energies is qualitative";
  ctx.write("results.csv", csv.str());
  ctx.write("tail.csv", os.str());
}

void run_landau(Context& ctx) {
  const auto& c = ctx.config;
  const LandauReport rep = landau_cluster_check(c.model.sides[0], c.model.sides[1], c.model.spacing, c.model.field(0, 1));
  const double tol = c.params.tolerance > 0.0 ? c.params.tolerance : 0.15;
  std::ostringstream os;
  os << "index,eigenvalue\n";
  for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) os << i << ',' << fmt(rep.eigenvalues[i]) << '\n';
  LongCsv csv(c.experiment);
  const BoxSpec box(c.model.sides, c.model.spacing, BoundaryCondition::Periodic);
  for (double e : {0.5 * rep.effective_b, rep.effective_b, 2.0 * rep.effective_b}) {
    const auto n = static_cast<double>(
        std::lower_bound(rep.eigenvalues.begin(), rep.eigenvalues.end(), e) - rep.eigenvalues.begin());
    csv.add(box_label(box), "periodic", e, n / rep.volume, 0.0);
  }
  ctx.results = {{"requested_b", rep.requested_b},       {"effective_b", rep.effective_b},
                 {"flux_quanta", rep.flux_quanta},       {"volume", rep.volume},
                 {"cluster_count", rep.cluster_count},   {"expected_count", rep.expected_count},
                 {"cluster_mean", rep.cluster_mean},     {"cluster_spread", rep.cluster_spread},
                 {"reference_step", rep.reference_step}, {"measured_step", rep.measured_step}};
  if (rep.effective_b != rep.requested_b)
    ctx.warnings.push_back("B snapped from " + brief(rep.requested_b) + " to " + brief(rep.effective_b) +
                           " for an integer number of flux quanta on the torus");
  const double rel = std::abs(static_cast<double>(rep.cluster_count) - rep.expected_count) / rep.expected_count;
  ctx.check("cluster_count", rel <= tol,
            std::to_string(rep.cluster_count) + " states below B vs B|Lambda|/2pi = " + brief(rep.expected_count));
  ctx.check("cluster_position", std::abs(rep.cluster_mean - 0.5 * rep.effective_b) <= tol * 0.5 * rep.effective_b,
            "cluster mean " + brief(rep.cluster_mean) + " vs B/2 = " + brief(0.5 * rep.effective_b));
  const double step_rel = std::abs(rep.measured_step - rep.reference_step) / rep.reference_step;
  ctx.check("step_height", step_rel <= tol,
            "measured step " + brief(rep.measured_step) + " vs reference " + brief(rep.reference_step));
  ctx.write("results.csv", csv.str());
  ctx.write("landau.csv", os.str());
}

void run_support(Context& ctx) {
  const auto& c = ctx.config;
  const BoxSpec box = box_of(c, c.model.bcs.front());
  const auto energies = resolve_energies(c, box);
  const SupportReport rep = support_spectrum_check(c.ensemble, box, field_of(c), ctx.settings(energies));
  LongCsv csv(c.experiment);
  for (std::size_t i = 0; i < rep.energies.size(); ++i)
    csv.add(box_label(box), std::string(to_string(box.bc())), rep.energies[i], rep.mean[i], 0.0);
  std::ostringstream os;
  os << "gap_lo,gap_hi\n";
  json gaps = json::array();
  for (const auto& [lo, hi] : rep.gaps) {
    os << fmt(lo) << ',' << fmt(hi) << '\n';
    gaps.push_back({lo, hi});
  }
  std::size_t uncovered = 0;
  for (auto u : rep.uncovered_growth_cells) uncovered = std::max(uncovered, u);
  ctx.results = {{"growth_cells", rep.growth_cells},
                 {"eigenvalues_outside_growth", rep.eigenvalues_outside_growth},
                 {"uncovered_growth_cells", rep.uncovered_growth_cells},
                 {"gaps", gaps}};
  ctx.check("eigenvalues_in_growth", rep.eigenvalues_outside_growth == 0,
            std::to_string(rep.eigenvalues_outside_growth) + " eigenvalue(s) outside the growth set", true);
  ctx.check("growth_covered", uncovered == 0,
            "max growth cells without a nearby eigenvalue in one realization: " + std::to_string(uncovered), true);
  ctx.write("results.csv", csv.str());
  ctx.write("gaps.csv", os.str());
}

void run_moment(Context& ctx) {
  const auto& c = ctx.config;
  const MomentReport rep = check_moment_bound(c.ensemble, c.model.d, c.params.q, c.params.r, c.params.samples,
                                              c.run.master_seed, c.params.cell_resolution);
  std::ostringstream os;
  os << "q,r,lhs_estimate,lhs_stderr,rhs_bound,measure_moment,profile_sum,samples,violated\n";
  os << fmt(rep.q) << ',' << fmt(rep.r) << ',' << fmt(rep.lhs_estimate) << ',' << fmt(rep.lhs_stderr) << ','
     << fmt(rep.rhs_bound) << ',' << fmt(rep.measure_moment) << ',' << fmt(rep.profile_sum) << ',' << rep.samples << ','
     << (rep.violated ? 1 : 0) << '\n';
  ctx.results = {{"lhs_estimate", rep.lhs_estimate}, {"lhs_stderr", rep.lhs_stderr}, {"rhs_bound", rep.rhs_bound},
                 {"theta_used", rep.theta_used}};
  ctx.check("moment_bound", !rep.violated,
            "lhs " + brief(rep.lhs_estimate) + " +- " + brief(rep.lhs_stderr) + " vs rhs " + brief(rep.rhs_bound));
  ctx.write("moment.csv", os.str());
}

void run_measure_demo(Context& ctx) {
  const auto& c = ctx.config;
  const std::size_t count = std::max<std::size_t>(c.run.realizations, 8);
  const StieltjesProbe probe{{0.0, 1.0}, 2.0};
  std::ostringstream os;
  os << "family,n,quantity,value,expected\n";
  double worst_vague = 0.0, worst_escape = 0.0;
  std::vector<AtomicMeasure> escaping, harmonic;
  for (std::size_t n = 1; n <= count; ++n) {
    const double nn = static_cast<double>(n);
    const double expected = 1.0 / (nn * nn + 1.0);
    const double d1 = vague_distance(AtomicMeasure::dirac(1.0 / nn), AtomicMeasure::dirac(0.0), {probe});
    const double d2 = vague_distance(AtomicMeasure::dirac(-nn), AtomicMeasure(), {probe});
    worst_vague = std::max(worst_vague, std::abs(d1 - expected));
    worst_escape = std::max(worst_escape, std::abs(d2 - expected));
    os << "dirac-1/n," << n << ",vague_distance," << fmt(d1) << ',' << fmt(expected) << '\n';
    os << "dirac-minus-n," << n << ",vague_distance," << fmt(d2) << ',' << fmt(expected) << '\n';
    escaping.push_back(AtomicMeasure::dirac(-nn));
    std::vector<AtomicMeasure::Atom> atoms;
    for (std::size_t k = 1; k <= n; ++k) atoms.push_back({1.0 / static_cast<double>(k), 1.0 / nn});
    harmonic.push_back(AtomicMeasure(std::move(atoms)));
  }
  const std::vector<double> grid{-4.0, -2.0, -1.0};
  const auto esc = tightness_profile(escaping, grid);
  const auto har = tightness_profile(harmonic, grid);
  bool esc_ok = true, har_ok = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    os << "dirac-minus-n," << count << ",tightness@" << fmt(grid[i]) << ',' << fmt(esc[i]) << ",1\n";
    os << "harmonic," << count << ",tightness@" << fmt(grid[i]) << ',' << fmt(har[i]) << ",0\n";
    esc_ok = esc_ok && esc[i] == 1.0;
    har_ok = har_ok && har[i] == 0.0;
  }
  double worst_norm = 0.0;
  for (double p : {2.0, 3.0, 5.0})
    for (double eps : {1.0, 0.1}) {
      const SmoothingKernel k(p, eps);
      const double t = std::pow(2.0 * k.upsilon() * std::pow(eps, p - 1.0) / ((p - 1.0) * 1e-12), 1.0 / (p - 1.0));
      const double mass = 2.0 * adaptive_simpson([&](double e) { return k(e); }, 0.0, t, 1e-12, 100);
      worst_norm = std::max(worst_norm, std::abs(mass - 1.0));
      os << "kernel-p" << fmt(p) << "-eps" << fmt(eps) << ",0,mass," << fmt(mass) << ",1\n";
    }
  ctx.results = {{"vague_max_error", worst_vague},
                 {"escape_max_error", worst_escape},
                 {"kernel_max_mass_error", worst_norm},
                 {"probe_grid_note", "transform agreement on a finite probe grid is necessary, not sufficient"}};
  ctx.check("dirac_convergence", worst_vague <= 1e-12, "vague distance of delta_{1/n} to delta_0 equals 1/(n^2+1)");
  ctx.check("escaping_mass", worst_escape <= 1e-12 && esc_ok,
            "delta_{-n}: vague distance to 0 vanishes while the tightness profile stays 1");
  ctx.check("harmonic_tight", har_ok, "atoms on (0, 1]: tightness profile 0 for E <= 0");
  ctx.check("kernel_mass", worst_norm <= 1e-8, "smoothing kernels integrate to 1 within 1e-8");
  ctx.write("measure.csv", os.str());
}

std::string overall(const std::map<std::string, Check>& checks) {
  bool warn = false;
  for (const auto& [_, ch] : checks) {
    if (ch.status == "fail") return "fail";
    if (ch.status == "warn") warn = true;
  }
  return warn ? "warn" : "pass";
}

json seeds_json(const ExperimentConfig& c) {
  constexpr std::size_t kListed = 1000;
  json list = json::array();
  for (std::size_t r = 0; r < std::min(c.run.realizations, kListed); ++r)
    list.push_back(realization_seed(c.run.master_seed, r));
  return {{"master_seed", c.run.master_seed},
          {"realization_seeds", list},
          {"listed", list.size()},
          {"rule", "realization r uses derive_seed(master_seed, r)"}};
}

}  // namespace

std::string box_label(const BoxSpec& box) {
  std::string s;
  for (int a = 0; a < box.dim(); ++a) s += (a ? "x" : "") + std::to_string(box.side(a));
  return s;
}

std::vector<double> resolve_energies(const ExperimentConfig& c, const BoxSpec& pilot_box) {
  const auto& g = c.run.energies;
  switch (g.kind) {
    case EnergyGridSpec::Kind::List: return g.values;
    case EnergyGridSpec::Kind::Uniform: return uniform_grid(g.lo, g.hi, g.points);
    case EnergyGridSpec::Kind::Pilot:
      return pilot_energy_grid(c.ensemble, pilot_box, field_of(c), c.run.master_seed, g.points);
  }
  return {};
}

std::filesystem::path resolve_output_dir(const ExperimentConfig& c, const std::optional<std::filesystem::path>& cli) {
  if (cli) return *cli;
  if (const char* env = std::getenv("IDSLAB_OUT"); env && *env) return env;
  return c.output_dir;
}

RunOutcome run_experiment(const ExperimentConfig& c, const RunOptions& options) {
  RunOutcome outcome;
  outcome.dir = resolve_output_dir(c, options.out_dir);
  outcome.warnings = validate_config(c);
  std::filesystem::create_directories(outcome.dir);
  std::filesystem::remove(outcome.dir / "manifest.json");
  std::filesystem::remove(outcome.dir / "error.json");

  ExperimentConfig effective = c;
  if (options.workers) effective.run.workers = *options.workers;
  Context ctx{effective, outcome.dir, effective.run.workers, {}, {}, json::object(), {}};
  const json echo = config_to_json(effective);

  auto summary = [&](const std::string& status) {
    json checks = json::object();
    for (const auto& [k, ch] : ctx.checks) checks[k] = {{"status", ch.status}, {"detail", ch.detail}};
    const auto* info = find_experiment(effective.experiment);
    json s = {{"experiment", effective.experiment},
              {"anchor", info ? std::string(info->anchor) : std::string()},
              {"status", status},
              {"config", echo},
              {"seeds", seeds_json(effective)},
              {"checks", checks},
              {"results", ctx.results},
              {"warnings", outcome.warnings},
              {"columns", kLongColumns},
              {"float_format", "%.17g"}};
    return s.dump(2) + "\n";
  };

  try {
    const std::string& x = effective.experiment;
    if (x == "ids") run_ids(ctx);
    else if (x == "bc-gap") run_bc_gap(ctx);
    else if (x == "truncation") run_truncation(ctx);
    else if (x == "tightness") run_tightness(ctx);
    else if (x == "weyl") run_weyl(ctx);
    else if (x == "gaussian-tail") run_gaussian_tail(ctx);
    else if (x == "landau") run_landau(ctx);
    else if (x == "support-spectrum") run_support(ctx);
    else if (x == "moment-check") run_moment(ctx);
    else if (x == "measure-demo") run_measure_demo(ctx);
    else throw ConfigError("experiment: unknown experiment '" + x + "'");
  } catch (const std::exception& e) {
    outcome.error = e.what();
    outcome.exit_code = ExitCode::Error;
    outcome.status = "error";
    for (auto& w : ctx.warnings) outcome.warnings.push_back(w);
    json err = {{"experiment", effective.experiment}, {"error", outcome.error}, {"partial_files", ctx.files}};
    std::ofstream(outcome.dir / "error.json", std::ios::binary) << err.dump(2) << '\n';
    outcome.files = ctx.files;
    outcome.checks = ctx.checks;
    return outcome;
  }

  for (auto& w : ctx.warnings) outcome.warnings.push_back(w);
  outcome.status = overall(ctx.checks);
  ctx.write("summary.json", summary(outcome.status));
  write_manifest(outcome.dir, ctx.files, echo, {{effective.experiment, outcome.status}});
  outcome.files = ctx.files;
  outcome.checks = ctx.checks;
  outcome.exit_code = outcome.status == "fail" ? ExitCode::DiagnosticFailure : ExitCode::Pass;
  return outcome;
}

}  // namespace idslab::app
