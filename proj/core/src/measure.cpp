#include "idslab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "idslab/error.hpp"
#include "idslab/format.hpp"

namespace idslab {

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) {
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.location)) throw InvalidArgument("atomic measure: non-finite location");
    if (!(a.weight > 0.0) || !std::isfinite(a.weight))
      throw InvalidArgument("atomic measure: weights must be positive and finite");
  }
  std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) { return x.location < y.location; });
  for (const Atom& a : atoms) {
    if (!atoms_.empty() && atoms_.back().location == a.location)
      atoms_.back().weight += a.weight;
    else
      atoms_.push_back(a);
  }
  cumulative_.assign(atoms_.size() + 1, 0.0);
  for (std::size_t i = 0; i < atoms_.size(); ++i) cumulative_[i + 1] = cumulative_[i] + atoms_[i].weight;
}

AtomicMeasure AtomicMeasure::from_spectrum(const Spectrum& spectrum, double weight) {
  std::vector<Atom> atoms;
  atoms.reserve(spectrum.eigenvalues.size());
  for (double e : spectrum.eigenvalues) atoms.push_back({e, weight});
  return AtomicMeasure(std::move(atoms));
}

AtomicMeasure AtomicMeasure::dirac(double location, double weight) { return AtomicMeasure({{location, weight}}); }

double AtomicMeasure::total_mass() const noexcept { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

double AtomicMeasure::distribution_function(double energy) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), energy,
                             [](const Atom& a, double e) { return a.location < e; });
  if (cumulative_.empty()) return 0.0;
  return cumulative_[static_cast<std::size_t>(it - atoms_.begin())];
}

AtomicMeasure AtomicMeasure::scaled(double factor) const {
  if (!(factor > 0.0)) throw InvalidArgument("atomic measure: scale factor must be positive");
  std::vector<Atom> atoms = atoms_;
  for (Atom& a : atoms) a.weight *= factor;
  return AtomicMeasure(std::move(atoms));
}

std::string AtomicMeasure::to_csv() const {
  std::ostringstream os;
  os << "location,weight\n";
  for (const Atom& a : atoms_) os << format_double(a.location) << ',' << format_double(a.weight) << '\n';
  return os.str();
}

std::string AtomicMeasure::to_json() const {
  nlohmann::json j;
  j["atoms"] = nlohmann::json::array();
  for (const Atom& a : atoms_) j["atoms"].push_back({{"location", a.location}, {"weight", a.weight}});
  return j.dump();
}

AtomicMeasure AtomicMeasure::from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms")) atoms.push_back({a.at("location").get<double>(), a.at("weight").get<double>()});
    return AtomicMeasure(std::move(atoms));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("atomic measure: malformed JSON: ") + e.what());
  }
}

double integrate(const AtomicMeasure& mu, const RealFunction& f) {
  double sum = 0.0;
  for (const auto& a : mu.atoms()) {
    const double v = f(a.location);
    if (!std::isfinite(v))
      throw InvalidArgument("integrate: integrand is not finite at atom " + format_double(a.location));
    sum += a.weight * v;
  }
  return sum;
}

double stieltjes(const AtomicMeasure& mu, std::complex<double> z, double p) {
  if (z.imag() == 0.0) throw InvalidArgument("stieltjes: z must have non-zero imaginary part");
  if (!(p > 1.0)) throw InvalidArgument("stieltjes: p must exceed 1");
  double sum = 0.0;
  for (const auto& a : mu.atoms()) sum += a.weight / std::pow(std::abs(a.location - z), p);
  return sum;
}

namespace {

double simpson_step(const RealFunction& f, double a, double fa, double b, double fb, double m, double fm,
                    double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  // Round-off floor: halving tol indefinitely would never terminate on long intervals.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(left) + std::abs(right));
  if (depth <= 0 || std::abs(delta) <= std::max(15.0 * tol, floor)) return left + right + delta / 15.0;
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const RealFunction& f, double a, double b, double tol, int max_depth) {
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

double upsilon(double p) {
  if (!(p > 1.0)) throw InvalidArgument("smoothing kernel: p must exceed 1 (kernel is not normalizable)");
  // 2 ∫_T^∞ ξ^{-p} dξ = 2 T^{1-p} / (p - 1) < 1e-10
  double t = std::pow(2.0 / ((p - 1.0) * 1e-10), 1.0 / (p - 1.0));
  t = std::min(t, 1e300);
  const RealFunction f = [p](double xi) { return std::pow(1.0 + xi * xi, -0.5 * p); };
  const double half = adaptive_simpson(f, 0.0, t, 1e-13, 100);
  return 1.0 / (2.0 * half);
}

SmoothingKernel::SmoothingKernel(double p, double eps) : p_(p), eps_(eps), upsilon_(0.0) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("smoothing kernel: eps must be positive");
  upsilon_ = idslab::upsilon(p);
}

double SmoothingKernel::operator()(double energy) const noexcept {
  return upsilon_ * std::pow(eps_, p_ - 1.0) / std::pow(energy * energy + eps_ * eps_, 0.5 * p_);
}

double indicator_hat_value(double energy, double x) noexcept {
  if (x < energy) return 1.0;
  if (x < energy + 1.0) return energy + 1.0 - x;
  return 0.0;
}

RealFunction indicator_hat(double energy) {
  return [energy](double x) { return indicator_hat_value(energy, x); };
}

double smoothed_indicator_value(double energy, double eps, double x) noexcept {
  // ∫_E^{E+1} F(a - x) da with F the Cauchy distribution function; G is its antiderivative.
  auto g = [eps](double u) {
    return 0.5 * u + (u * std::atan(u / eps) - 0.5 * eps * std::log(u * u + eps * eps)) / std::numbers::pi;
  };
  return g(energy + 1.0 - x) - g(energy - x);
}

std::vector<StieltjesProbe> default_probe_grid() {
  using namespace std::complex_literals;
  return {{1i, 2.0}, {1.0 + 1i, 2.0}, {-1.0 + 1i, 2.0}, {2i, 2.0}};
}

double vague_distance(const AtomicMeasure& mu, const AtomicMeasure& nu, const std::vector<StieltjesProbe>& grid) {
  if (grid.empty()) throw InvalidArgument("vague_distance: empty probe grid");
  double worst = 0.0;
  for (const auto& probe : grid)
    worst = std::max(worst, std::abs(stieltjes(mu, probe.z, probe.p) - stieltjes(nu, probe.z, probe.p)));
  return worst;
}

std::vector<double> tightness_profile(const std::vector<AtomicMeasure>& sequence, const std::vector<double>& energies) {
  if (sequence.empty() || energies.empty()) throw InvalidArgument("tightness_profile: empty sequence or grid");
  std::vector<double> out;
  out.reserve(energies.size());
  for (double e : energies) {
    double m = 0.0;
    for (std::size_t k = sequence.size() / 2; k < sequence.size(); ++k)
      m = std::max(m, sequence[k].distribution_function(e));
    out.push_back(m);
  }
  return out;
}

}  // namespace idslab
