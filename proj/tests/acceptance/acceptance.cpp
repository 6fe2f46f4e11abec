// One PASS/FAIL line per acceptance criterion. Experiment parameters come from the shipped
// configs; every verdict is computed here from library results.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "idslab/ids.hpp"
#include "idslab/measure.hpp"
#include "idslab/operator.hpp"
#include "idslab/potential.hpp"
#include "idslab/spectral.hpp"
#include "oracles.hpp"
#include "runner.hpp"

using namespace idslab;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

fs::path config_path(const std::string& name) { return fs::path(IDSLAB_CONFIG_DIR) / (name + ".toml"); }

app::ExperimentConfig config(const std::string& name) { return app::load_config(config_path(name)); }

RunSettings settings_of(const app::ExperimentConfig& c, std::vector<double> energies) {
  return {std::move(energies), c.run.realizations, c.run.master_seed, c.run.workers};
}

std::vector<double> random_values(std::size_t n, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

// 1. eigensolver against Sturm bisection; trace identity
Verdict criterion1() {
  std::mt19937_64 rng(1);
  double worst = 0.0, worst_trace = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t * 63 / 99);
    const auto h = oracle::random_hermitian(n, rng, t % 4 == 0);
    const double norm = norm_proxy(h);
    const auto s = eigenvalues(h);
    const auto ref = oracle::bisection_eigenvalues(h, 1e-10 * norm);
    worst = std::max(worst, oracle::max_abs_diff(s.eigenvalues, ref) / norm);
    long double tr = 0, sum = 0;
    for (std::size_t i = 0; i < n; ++i) tr += h(i, i).real();
    for (double l : s.eigenvalues) sum += l;
    // relative to the trace scale sum |λ|, which is bounded below by |tr|
    long double abs_sum = 0;
    for (double l : s.eigenvalues) abs_sum += std::abs(l);
    worst_trace = std::max(worst_trace, static_cast<double>(std::abs(sum - tr) / std::max<long double>(abs_sum, 1)));
  }
  return {worst <= 1e-8 && worst_trace <= 1e-10,
          "max |λ - oracle| / ||H|| = " + fmt(worst) + " (<= 1e-8), trace rel. error " + fmt(worst_trace) +
              " (<= 1e-10), 100 matrices n = 1..64"};
}

// 2. gauge and magnetic translation invariance
Verdict criterion2() {
  std::mt19937_64 rng(2);
  double worst_gauge = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int lx = 3 + t % 6, ly = 3 + (t / 6) % 5;
    const auto bc = t % 2 ? BoundaryCondition::Neumann : BoundaryCondition::Dirichlet;
    const BoxSpec box({lx, ly}, 0.5 + 0.1 * (t % 5), bc);
    std::uniform_real_distribution<double> ub(-3, 3);
    const auto op = build_hamiltonian(box, MagneticField::planar(2, ub(rng)), random_values(box.site_count(), rng, 2));
    const auto g = gauge_transform(op, random_values(box.site_count(), rng, 50));
    worst_gauge = std::max(
        worst_gauge, oracle::max_abs_diff(eigenvalues(g).eigenvalues, eigenvalues(op).eigenvalues) / op.norm());
  }
  double worst_trans = 0.0, worst_matrix = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int l = 4 + t % 4;
    const int quanta = 1 + t % 3;
    const double h = 1.0;
    const double b = 2 * std::numbers::pi * quanta / (l * h * h);
    const BoxSpec box({l, l}, h, BoundaryCondition::Periodic);
    const auto field = MagneticField::planar(2, b);
    const auto v = random_values(box.site_count(), rng, 2);
    const auto op = build_hamiltonian(box, field, v);
    std::uniform_int_distribution<int> us(0, l - 1);
    const std::vector<int> shift{us(rng), us(rng)};
    std::vector<double> shifted(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      auto c = box.coords(i);
      c[0] = (c[0] + shift[0]) % l;
      c[1] = (c[1] + shift[1]) % l;
      shifted[i] = v[box.index(c)];
    }
    const auto moved = magnetic_translate(op, field, shift);
    const auto rebuilt = build_hamiltonian(box, field, shifted);
    worst_trans = std::max(
        worst_trans, oracle::max_abs_diff(eigenvalues(moved).eigenvalues, eigenvalues(rebuilt).eigenvalues) / op.norm());
    worst_matrix = std::max(worst_matrix, max_abs_difference(moved.matrix(), rebuilt.matrix()) / op.norm());
  }
  return {worst_gauge <= 1e-10 && worst_trans <= 1e-10,
          "gauge: max spectral shift / ||H|| = " + fmt(worst_gauge) + ", translation: " + fmt(worst_trans) +
              " (<= 1e-10; operator mismatch " + fmt(worst_matrix) + ")"};
}

// 3. diamagnetic domination
Verdict criterion3() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ub(-4, 4);
  double worst = -INFINITY;
  int cases = 0;
  for (int f = 0; f < 10; ++f) {
    const int side = 3 + f;  // up to 12
    for (auto bc : {BoundaryCondition::Dirichlet, BoundaryCondition::Neumann}) {
      const BoxSpec box({side, std::max(2, side - f % 3)}, 1.0, bc);
      const std::vector<double> zero(box.site_count(), 0.0);
      const auto free = eigen_decomposition(build_hamiltonian(box, MagneticField::zero(2), zero));
      const auto mag = eigen_decomposition(build_hamiltonian(box, MagneticField::planar(2, ub(rng)), zero));
      for (double t : {0.1, 0.5, 1.0, 2.0}) {
        const auto k0 = heat_kernel(free, t), kb = heat_kernel(mag, t);
        for (std::size_t i = 0; i < k0.rows(); ++i)
          for (std::size_t j = 0; j < k0.cols(); ++j) worst = std::max(worst, std::abs(kb(i, j)) - k0(i, j).real());
        ++cases;
      }
    }
  }
  return {worst <= 1e-12, "max_ij |e^{-tH(A)}| - e^{-tH(0)} = " + fmt(worst) + " (<= 1e-12) over " +
                              std::to_string(cases) + " (field, bc, t) cases, boxes up to 12x12"};
}

// 4-6. bc sandwich, bc independence trend, self-averaging (one shared run)
struct BcGapRun {
  BcGapTable table;
  std::vector<double> energies;
};

const BcGapRun& bc_gap_run() {
  static const BcGapRun run = [] {
    const auto c = config("bc-gap");
    std::vector<BoxSpec> boxes;
    for (int s : c.params.sweep_sides) boxes.push_back(BoxSpec::cube(2, s, c.model.spacing, BoundaryCondition::Dirichlet));
    const auto energies = app::resolve_energies(c, boxes.back());
    return BcGapRun{bc_gap(c.ensemble, boxes, app::field_of(c), settings_of(c, energies), c.params.smoothing_eps),
                    energies};
  }();
  return run;
}

Verdict criterion4() {
  const auto& t = bc_gap_run().table;
  std::size_t checked = 0;
  for (const auto& row : t.rows) checked += row.dirichlet.counts.size() * row.dirichlet.energies.size();
  return {t.total_violations() == 0, std::to_string(t.total_violations()) + " violations of N_D <= N_N in " +
                                         std::to_string(checked) + " (seed, box, E) comparisons"};
}

Verdict criterion5() {
  const auto& t = bc_gap_run().table;
  std::string gaps;
  for (const auto& row : t.rows) gaps += (gaps.empty() ? "" : ", ") + fmt(row.sup_gap);
  const double ratio = t.rows[2].sup_gap / t.rows[1].sup_gap;
  const bool dec = t.rows[0].sup_gap > t.rows[1].sup_gap && t.rows[1].sup_gap > t.rows[2].sup_gap;
  return {dec && ratio >= 0.3 && ratio <= 0.8,
          "sup gaps (8^2, 16^2, 32^2) = " + gaps + "; ratio 32/16 = " + fmt(ratio) + " (in [0.3, 0.8])"};
}

Verdict criterion6() {
  const auto& run = bc_gap_run();
  const auto& big = run.table.rows[2].dirichlet;
  const auto& mid = run.table.rows[1].dirichlet;
  const double e_mid = 0.5 * (big.spectrum_min + big.spectrum_max);
  std::size_t k = 0;
  for (std::size_t i = 0; i < run.energies.size(); ++i)
    if (std::abs(run.energies[i] - e_mid) < std::abs(run.energies[k] - e_mid)) k = i;
  const double factor = mid.std_dev[k] / big.std_dev[k];
  return {factor >= 1.4 && factor <= 3.5, "std(16^2)/std(32^2) at E = " + fmt(run.energies[k]) + ": " +
                                              fmt(mid.std_dev[k]) + "/" + fmt(big.std_dev[k]) + " = " + fmt(factor) +
                                              " (in [1.4, 3.5])"};
}

// 7. truncation convergence
Verdict criterion7() {
  const auto c = config("truncation");
  const BoxSpec box = app::box_of(c, c.model.bcs.front());
  const auto energies = app::resolve_energies(c, box);
  const auto t = truncation_sweep(c.ensemble, box, app::field_of(c), c.params.levels, settings_of(c, energies),
                                  c.params.smoothing_eps);
  bool strict = true, zero_above = true;
  std::string devs;
  for (std::size_t j = 0; j < t.rows.size(); ++j) {
    devs += (devs.empty() ? "" : ", ") + fmt(t.rows[j].sup_deviation);
    if (j > 0 && !(t.rows[j].sup_deviation < t.rows[j - 1].sup_deviation)) strict = false;
    if (t.rows[j].level > t.realized_max_abs && t.rows[j].sup_deviation != 0.0) zero_above = false;
  }
  return {strict && zero_above, "sup deviations at n = 1, 2, 4, 8: " + devs + "; realized max|V| = " +
                                    fmt(t.realized_max_abs) + (strict ? ", strictly decreasing" : ", NOT strictly decreasing") +
                                    (zero_above ? ", exact 0 above max|V|" : ", nonzero above max|V|")};
}

// 8. tightness exponent and positivity
Verdict criterion8() {
  const auto c = config("tightness");
  const auto energies = c.run.energies.values;
  std::vector<IDSEstimate> ests;
  for (int s : c.params.sweep_sides)
    ests.push_back(finite_volume_ids(c.ensemble, BoxSpec::cube(2, s, c.model.spacing, c.model.bcs.front()),
                                     app::field_of(c), settings_of(c, energies)));
  const auto rep = tightness_check(ests, energies);

  const auto poisson = EnsembleSpec::poisson(Profile::unit_cube(), 1.0);
  const BoxSpec pbox = BoxSpec::cube(2, 16, 1.0, BoundaryCondition::Dirichlet);
  const auto pest = finite_volume_ids(poisson, pbox, MagneticField::zero(2),
                                      {uniform_grid(-6.0, -1e-3, 50), 50, 20240601, 0});
  std::size_t bad = 0;
  for (const auto& counts : pest.counts)
    for (auto n : counts) bad += n > 0;
  const bool slope_ok = rep.fit_points >= 2 && rep.fitted_slope <= -0.7;
  return {slope_ok && bad == 0, "fitted slope " + fmt(rep.fitted_slope) + " over " + std::to_string(rep.fit_points) +
                                    " energies (<= -0.7); nonnegative Poisson: " + std::to_string(bad) +
                                    " (seed, E < 0) pairs with N > 0"};
}

// 9. Weyl asymptotics
Verdict criterion9() {
  const auto rows = weyl_check(2, {16.0}, {0.25}, {1.0});
  const auto& r = rows.front();
  const double n_avg = 0.5 * (r.count_dirichlet + r.count_neumann) / (16.0 * 16.0);  // per volume, E = 1
  return {std::abs(r.ratio - 1.0) <= 0.1, "N_D = " + std::to_string(r.count_dirichlet) + ", N_N = " +
                                              std::to_string(r.count_neumann) + ", E^{-1} N(E) = " + fmt(n_avg) +
                                              " vs 1/(2π) = " + fmt(weyl_constant(2)) + ", ratio " + fmt(r.ratio) +
                                              " (within 0.1 of 1)"};
}

// 10. Gaussian tail
Verdict criterion10() {
  const auto c = config("gaussian-tail");
  const auto rows = gaussian_tail_check(c.ensemble.covariance, 2, c.params.sweep_sides, c.model.spacing,
                                        app::field_of(c), c.model.bcs.front(), settings_of(c, c.run.energies.values));
  for (const auto& r : rows) {
    if (r.energy != -4.0) continue;
    if (r.excluded) return {false, "N(-4) = 0 in every realization; E = -4 excluded"};
    const double q = r.measured / r.reference;
    return {q >= 1 / 1.6 && q <= 1.6, "E^{-2} log N(-4) = " + fmt(r.measured) + " (N = " + fmt(r.mean) + " ± " +
                                          fmt(r.std_error) + ") vs " + fmt(r.reference) + ", ratio " + fmt(q) +
                                          " (in [0.625, 1.6])"};
  }
  return {false, "E = -4 not on the configured grid"};
}

// 11. Landau cluster
Verdict criterion11() {
  const auto c = config("landau");
  const auto rep = landau_cluster_check(c.model.sides[0], c.model.sides[1], c.model.spacing, c.model.field(0, 1));
  const double count_err = std::abs(double(rep.cluster_count) - rep.expected_count) / rep.expected_count;
  const double pos_err = std::abs(rep.cluster_mean - rep.effective_b / 2) / (rep.effective_b / 2);
  const double step_err = std::abs(rep.measured_step - rep.reference_step) / rep.reference_step;
  return {count_err <= 0.15 && pos_err <= 0.15 && step_err <= 0.15,
          std::to_string(rep.cluster_count) + " states below B vs B|Λ|/2π = " + fmt(rep.expected_count) +
              " (B snapped " + fmt(rep.requested_b) + " -> " + fmt(rep.effective_b) + "), cluster mean " +
              fmt(rep.cluster_mean) + " vs B/2, step " + fmt(rep.measured_step) + " vs " + fmt(rep.reference_step)};
}

// 12. measure machinery
Verdict criterion12() {
  std::vector<std::string> failures;
  const std::vector<StieltjesProbe> grid{{{0, 1}, 2.0}};
  double prev = INFINITY;
  for (int n = 1; n <= 1000; n *= 2) {
    const double expect = 1.0 / (double(n) * n + 1.0);
    const double d = vague_distance(AtomicMeasure::dirac(1.0 / n), AtomicMeasure::dirac(0.0), grid);
    const double e = vague_distance(AtomicMeasure::dirac(-double(n)), AtomicMeasure(), grid);
    if (std::abs(d - expect) > 1e-12 || !(d < prev)) failures.push_back("delta_{1/n} at n = " + std::to_string(n));
    if (std::abs(e - expect) > 1e-12) failures.push_back("escaping mass at n = " + std::to_string(n));
    prev = d;
  }
  std::vector<AtomicMeasure> escaping, harmonic;
  for (int n = 1; n <= 40; ++n) {
    escaping.push_back(AtomicMeasure::dirac(-double(n)));
    std::vector<AtomicMeasure::Atom> atoms;
    for (int k = 1; k <= n; ++k) atoms.push_back({1.0 / k, 1.0 / n});
    harmonic.push_back(AtomicMeasure(atoms));
  }
  for (double v : tightness_profile(escaping, {-1, -2, -4}))
    if (v != 1.0) failures.push_back("escaping-mass tightness profile");
  for (double v : tightness_profile(harmonic, {0.0, -1, -2}))
    if (v != 0.0) failures.push_back("harmonic tightness profile");

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> loc(-5, 5), w(0.1, 2), ep(0.05, 2);
  for (int t = 0; t < 200; ++t) {
    std::vector<AtomicMeasure::Atom> atoms;
    for (int k = 0; k < 1 + t % 12; ++k) atoms.push_back({loc(rng), w(rng)});
    const AtomicMeasure mu(atoms);
    const double e = loc(rng);
    const double v = integrate(mu, indicator_hat(e));
    if (!(mu.distribution_function(e) <= v && v <= mu.distribution_function(e + 1))) failures.push_back("squeeze");
    const double x = loc(rng), eps = ep(rng), p = 2.0 + t % 4;
    if (stieltjes(mu, {x, eps}, p) > std::pow(1 + std::abs(x) / eps, p) * stieltjes(mu, {0, eps}, p) * (1 + 1e-12))
      failures.push_back("stieltjes domination");
  }
  double worst_mass = 0.0;
  for (double p : {2.0, 3.0, 5.0})
    for (double eps : {1.0, 0.1}) {
      const SmoothingKernel k(p, eps);
      const double t = 1e4 * eps;
      const double body = adaptive_simpson([&](double x) { return k(x); }, -t, t, 1e-12, 100);
      const double tail = k.upsilon() * 2.0 * std::pow(eps / t, p - 1) / (p - 1);
      worst_mass = std::max(worst_mass, std::abs(body + tail - 1.0));
    }
  if (worst_mass > 1e-8) failures.push_back("kernel mass");
  std::sort(failures.begin(), failures.end());
  failures.erase(std::unique(failures.begin(), failures.end()), failures.end());
  std::string detail = "δ_{1/n}→δ_0 and escaping mass exact to 1e-12, tightness profiles, 200 squeeze and 200 "
                       "domination checks, kernel mass error " + fmt(worst_mass) + " (<= 1e-8)";
  for (const auto& f : failures) detail += "; failed: " + f;
  return {failures.empty(), detail};
}

// 13. moment bound examples
Verdict criterion13() {
  struct Case {
    std::string name;
    EnsembleSpec spec;
    double q, r;
  };
  const std::vector<Case> cases{
      {"alloy λ ≡ 1", EnsembleSpec::alloy(Profile::unit_cube(), CouplingDist::uniform(1, 1)), 2, 2},
      {"alloy uniform[0,1]", EnsembleSpec::alloy(Profile::unit_cube(), CouplingDist::uniform(0, 1)), 3, 3},
      {"Poisson ρ = 1", EnsembleSpec::poisson(Profile::unit_cube(), 1.0), 3, 3}};
  bool ok = true;
  std::string detail;
  std::uint64_t seed = 13;
  for (const auto& c : cases) {
    const auto rep = check_moment_bound(c.spec, 2, c.q, c.r, 4000, seed++);
    const bool pass = rep.lhs_estimate <= rep.rhs_bound + 3 * rep.lhs_stderr;
    ok = ok && pass;
    detail += (detail.empty() ? "" : "; ") + c.name + ": lhs " + fmt(rep.lhs_estimate) + " ± " + fmt(rep.lhs_stderr) +
              " vs rhs " + fmt(rep.rhs_bound);
  }
  return {ok, detail};
}

// 14. reproducibility
Verdict criterion14() {
  const fs::path root = fs::temp_directory_path() / "idslab_acceptance_repro";
  fs::remove_all(root);
  std::size_t compared = 0;
  std::vector<std::string> diffs;
  for (const std::string name : {"ids", "support-spectrum", "moment-check", "landau", "measure-demo"}) {
    const auto c = config(name);
    const auto a = app::run_experiment(c, {root / (name + "_a"), 1u});
    const auto b = app::run_experiment(c, {root / (name + "_b"), 0u});
    if (!a.error.empty() || !b.error.empty()) {
      diffs.push_back(name + " (error)");
      continue;
    }
    for (const auto& f : a.files) {
      if (fs::path(f).extension() != ".csv") continue;
      auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
      };
      ++compared;
      if (slurp(a.dir / f) != slurp(b.dir / f)) diffs.push_back(name + "/" + f);
    }
  }
  fs::remove_all(root);
  std::string detail = std::to_string(compared) + " CSV files compared across reruns with 1 and all workers";
  for (const auto& d : diffs) detail += "; differs: " + d;
  return {diffs.empty() && compared > 0, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"idslab acceptance suite"};
  std::vector<int> selected;
  cli.add_option("-c,--criterion", selected, "criterion number(s) to run (default: all)")->check(CLI::Range(1, 14));
  CLI11_PARSE(cli, argc, argv);
  if (selected.empty())
    for (int i = 1; i <= 14; ++i) selected.push_back(i);

  const std::map<int, std::function<Verdict()>> criteria{
      {1, criterion1},   {2, criterion2},   {3, criterion3},   {4, criterion4},   {5, criterion5},
      {6, criterion6},   {7, criterion7},   {8, criterion8},   {9, criterion9},   {10, criterion10},
      {11, criterion11}, {12, criterion12}, {13, criterion13}, {14, criterion14}};

  int failed = 0;
  for (int id : std::set<int>(selected.begin(), selected.end())) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria.at(id)();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", id, v.detail.c_str(), secs);
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
