#include "idslab/potential.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>

#include "idslab/error.hpp"
#include "idslab/format.hpp"

namespace idslab {

std::string_view to_string(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::Alloy: return "alloy";
    case EnsembleKind::Poisson: return "poisson";
    case EnsembleKind::Gaussian: return "gaussian";
  }
  return "unknown";
}

std::string_view to_string(ProfileShape s) {
  switch (s) {
    case ProfileShape::UnitCube: return "unit-cube";
    case ProfileShape::GaussianBump: return "gaussian-bump";
    case ProfileShape::Exponential: return "exponential";
  }
  return "unknown";
}

std::string_view to_string(CouplingKind k) {
  switch (k) {
    case CouplingKind::Uniform: return "uniform";
    case CouplingKind::Gaussian: return "gaussian";
    case CouplingKind::TwoPoint: return "two-point";
  }
  return "unknown";
}

std::string_view to_string(CovarianceKind k) {
  switch (k) {
    case CovarianceKind::GaussianBump: return "gaussian-bump";
    case CovarianceKind::Exponential: return "exponential";
  }
  return "unknown";
}

std::optional<EnsembleKind> parse_ensemble_kind(std::string_view s) {
  if (s == "alloy") return EnsembleKind::Alloy;
  if (s == "poisson") return EnsembleKind::Poisson;
  if (s == "gaussian") return EnsembleKind::Gaussian;
  return std::nullopt;
}

std::optional<ProfileShape> parse_profile_shape(std::string_view s) {
  if (s == "unit-cube") return ProfileShape::UnitCube;
  if (s == "gaussian-bump") return ProfileShape::GaussianBump;
  if (s == "exponential") return ProfileShape::Exponential;
  return std::nullopt;
}

std::optional<CouplingKind> parse_coupling_kind(std::string_view s) {
  if (s == "uniform") return CouplingKind::Uniform;
  if (s == "gaussian") return CouplingKind::Gaussian;
  if (s == "two-point") return CouplingKind::TwoPoint;
  return std::nullopt;
}

std::optional<CovarianceKind> parse_covariance_kind(std::string_view s) {
  if (s == "gaussian-bump") return CovarianceKind::GaussianBump;
  if (s == "exponential") return CovarianceKind::Exponential;
  return std::nullopt;
}

double Profile::operator()(const Point& y, int dim) const noexcept {
  if (shape == ProfileShape::UnitCube) {
    for (int a = 0; a < dim; ++a)
      if (y[a] < -0.5 || y[a] >= 0.5) return 0.0;
    return amplitude;
  }
  double r2 = 0.0;
  for (int a = 0; a < dim; ++a) r2 += y[a] * y[a];
  if (r2 > radius * radius) return 0.0;
  if (shape == ProfileShape::GaussianBump) return amplitude * std::exp(-r2 / (2.0 * width * width));
  return amplitude * std::exp(-std::sqrt(r2) / width);
}

double Profile::support_half_width() const noexcept { return shape == ProfileShape::UnitCube ? 0.5 : radius; }

double CouplingDist::sample(Rng& rng) const {
  switch (kind) {
    case CouplingKind::Uniform: return std::uniform_real_distribution<double>(a, b)(rng);
    case CouplingKind::Gaussian: return std::normal_distribution<double>(0.0, sigma)(rng);
    case CouplingKind::TwoPoint: return std::bernoulli_distribution(p)(rng) ? a : b;
  }
  return 0.0;
}

double CouplingDist::abs_moment(double r) const {
  switch (kind) {
    case CouplingKind::Uniform: {
      // ∫_a^b |x|^r dx / (b - a)
      auto prim = [r](double x) { return std::copysign(std::pow(std::abs(x), r + 1.0), x) / (r + 1.0); };
      if (b == a) return std::pow(std::abs(a), r);
      return (prim(b) - prim(a)) / (b - a);
    }
    case CouplingKind::Gaussian:
      return std::pow(sigma, r) * std::pow(2.0, r / 2.0) * std::tgamma((r + 1.0) / 2.0) / std::sqrt(std::numbers::pi);
    case CouplingKind::TwoPoint: return p * std::pow(std::abs(a), r) + (1.0 - p) * std::pow(std::abs(b), r);
  }
  return 0.0;
}

std::optional<double> CouplingDist::bound() const {
  if (kind == CouplingKind::Gaussian) return std::nullopt;
  return std::max(std::abs(a), std::abs(b));
}

bool CouplingDist::nonnegative() const noexcept {
  if (kind == CouplingKind::Gaussian) return sigma == 0.0;
  return a >= 0.0 && b >= 0.0;
}

double Covariance::operator()(double distance) const noexcept {
  if (kind == CovarianceKind::GaussianBump) return c0 * std::exp(-(distance * distance) / (length * length));
  return c0 * std::exp(-distance / length);
}

EnsembleSpec EnsembleSpec::alloy(Profile u, CouplingDist coupling) {
  EnsembleSpec s;
  s.kind = EnsembleKind::Alloy;
  s.profile = u;
  s.coupling = coupling;
  return s;
}

EnsembleSpec EnsembleSpec::poisson(Profile u, double intensity) {
  EnsembleSpec s;
  s.kind = EnsembleKind::Poisson;
  s.profile = u;
  s.intensity = intensity;
  return s;
}

EnsembleSpec EnsembleSpec::gaussian(Covariance c) {
  EnsembleSpec s;
  s.kind = EnsembleKind::Gaussian;
  s.covariance = c;
  return s;
}

EnsembleSpec EnsembleSpec::zero() { return poisson(Profile::unit_cube(), 0.0); }

bool EnsembleSpec::nonnegative() const noexcept {
  switch (kind) {
    case EnsembleKind::Alloy: return profile.amplitude >= 0.0 && coupling.nonnegative();
    case EnsembleKind::Poisson: return profile.amplitude >= 0.0;
    case EnsembleKind::Gaussian: return false;
  }
  return false;
}

bool EnsembleSpec::is_zero() const noexcept {
  return (kind == EnsembleKind::Poisson && intensity == 0.0) ||
         (kind != EnsembleKind::Gaussian && profile.amplitude == 0.0);
}

void EnsembleSpec::validate() const {
  auto finite = [](double x) { return std::isfinite(x); };
  if (kind != EnsembleKind::Gaussian) {
    if (!finite(profile.amplitude)) throw InvalidArgument("ensemble.profile.amplitude must be finite");
    if (profile.shape != ProfileShape::UnitCube) {
      if (!(profile.width > 0.0) || !finite(profile.width))
        throw InvalidArgument("ensemble.profile.width must be positive");
      if (!(profile.radius > 0.0) || !finite(profile.radius))
        throw InvalidArgument("ensemble.profile.radius must be positive and finite (compact support)");
    }
  }
  switch (kind) {
    case EnsembleKind::Alloy:
      if (coupling.kind == CouplingKind::Uniform && !(coupling.a <= coupling.b))
        throw InvalidArgument("ensemble.coupling: uniform needs a <= b");
      if (coupling.kind == CouplingKind::Gaussian && !(coupling.sigma >= 0.0))
        throw InvalidArgument("ensemble.coupling.sigma must be non-negative");
      if (coupling.kind == CouplingKind::TwoPoint && !(coupling.p >= 0.0 && coupling.p <= 1.0))
        throw InvalidArgument("ensemble.coupling.p must lie in [0, 1]");
      if (!finite(coupling.a) || !finite(coupling.b)) throw InvalidArgument("ensemble.coupling bounds must be finite");
      break;
    case EnsembleKind::Poisson:
      if (!(intensity >= 0.0) || !finite(intensity))
        throw InvalidArgument("ensemble.intensity must be a non-negative finite number");
      break;
    case EnsembleKind::Gaussian:
      if (!(covariance.c0 > 0.0) || !finite(covariance.c0))
        throw InvalidArgument("ensemble.covariance.c0 must be positive");
      if (!(covariance.length > 0.0) || !finite(covariance.length))
        throw InvalidArgument("ensemble.covariance.length must be positive");
      break;
  }
}

double PotentialSample::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

namespace {

void require_kind(const EnsembleSpec& spec, EnsembleKind kind, const char* who) {
  if (spec.kind != kind)
    throw InvalidArgument(std::string(who) + ": ensemble kind is " + std::string(to_string(spec.kind)));
  spec.validate();
}

PotentialSample make_sample(const EnsembleSpec& spec, const BoxSpec& box, std::uint64_t seed) {
  PotentialSample s{std::vector<double>(box.site_count(), 0.0), spec, seed, box};
  return s;
}

}  // namespace

PotentialSample sample_alloy(const EnsembleSpec& spec, const BoxSpec& box, std::uint64_t seed) {
  require_kind(spec, EnsembleKind::Alloy, "sample_alloy");
  const int d = box.dim();
  const double h = box.spacing();
  const double r = spec.profile.support_half_width();
  if (!std::isfinite(r)) throw InvalidArgument("sample_alloy: profile support radius must be finite");

  // Integer centers j with some site inside j + supp(u).
  std::array<long, kMaxDim> lo{0, 0, 0};
  std::array<long, kMaxDim> extent{1, 1, 1};
  std::size_t centers = 1;
  for (int a = 0; a < d; ++a) {
    lo[a] = static_cast<long>(std::ceil(-r));
    const long hi = static_cast<long>(std::floor((box.side(a) - 1) * h + r));
    extent[a] = hi - lo[a] + 1;
    centers *= static_cast<std::size_t>(extent[a]);
  }
  Rng rng = make_rng(seed);
  std::vector<double> lambda(centers);
  for (double& l : lambda) l = spec.coupling.sample(rng);

  PotentialSample out = make_sample(spec, box, seed);
  for (std::size_t i = 0; i < box.site_count(); ++i) {
    const Point x = box.position(i);
    std::array<long, kMaxDim> jlo{0, 0, 0};
    std::array<long, kMaxDim> jhi{0, 0, 0};
    for (int a = 0; a < d; ++a) {
      jlo[a] = std::max(lo[a], static_cast<long>(std::ceil(x[a] - r)));
      jhi[a] = std::min(lo[a] + extent[a] - 1, static_cast<long>(std::floor(x[a] + r)));
    }
    double v = 0.0;
    std::array<long, kMaxDim> j = jlo;
    while (true) {
      Point y{0.0, 0.0, 0.0};
      std::size_t idx = 0;
      for (int a = d - 1; a >= 0; --a) {
        y[a] = x[a] - static_cast<double>(j[a]);
        idx = idx * static_cast<std::size_t>(extent[a]) + static_cast<std::size_t>(j[a] - lo[a]);
      }
      const double u = spec.profile(y, d);
      if (u != 0.0) v += lambda[idx] * u;
      int a = 0;
      for (; a < d; ++a) {
        if (++j[a] <= jhi[a]) break;
        j[a] = jlo[a];
      }
      if (a == d) break;
    }
    out.values[i] = v;
  }
  return out;
}

double poisson_window_volume(const EnsembleSpec& spec, const BoxSpec& box) {
  const double r = spec.profile.support_half_width();
  double vol = 1.0;
  for (int a = 0; a < box.dim(); ++a) vol *= (box.side(a) - 1) * box.spacing() + 2.0 * r;
  return vol;
}

std::vector<Point> poisson_impurities(const EnsembleSpec& spec, const BoxSpec& box, std::uint64_t seed) {
  require_kind(spec, EnsembleKind::Poisson, "sample_poisson");
  const int d = box.dim();
  const double r = spec.profile.support_half_width();
  Rng rng = make_rng(seed);
  const double mean = spec.intensity * poisson_window_volume(spec, box);
  std::vector<Point> points;
  if (mean <= 0.0) return points;
  const auto count = std::poisson_distribution<long>(mean)(rng);
  points.reserve(static_cast<std::size_t>(count));
  for (long k = 0; k < count; ++k) {
    Point p{0.0, 0.0, 0.0};
    for (int a = 0; a < d; ++a)
      p[a] = std::uniform_real_distribution<double>(-r, (box.side(a) - 1) * box.spacing() + r)(rng);
    points.push_back(p);
  }
  return points;
}

PotentialSample sample_poisson(const EnsembleSpec& spec, const BoxSpec& box, std::uint64_t seed) {
  const std::vector<Point> points = poisson_impurities(spec, box, seed);
  const int d = box.dim();
  const double h = box.spacing();
  const double r = spec.profile.support_half_width();
  PotentialSample out = make_sample(spec, box, seed);
  for (const Point& p : points) {
    std::array<int, kMaxDim> lo{0, 0, 0};
    std::array<int, kMaxDim> hi{0, 0, 0};
    bool empty = false;
    for (int a = 0; a < d; ++a) {
      lo[a] = std::max(0, static_cast<int>(std::ceil((p[a] - r) / h)));
      hi[a] = std::min(box.side(a) - 1, static_cast<int>(std::floor((p[a] + r) / h)));
      if (lo[a] > hi[a]) empty = true;
    }
    if (empty) continue;
    SiteCoords c{lo[0], lo[1], lo[2]};
    while (true) {
      const std::size_t i = box.index(c);
      const Point x = box.position(i);
      Point y{0.0, 0.0, 0.0};
      for (int a = 0; a < d; ++a) y[a] = x[a] - p[a];
      out.values[i] += spec.profile(y, d);
      int a = 0;
      for (; a < d; ++a) {
        if (++c[a] <= hi[a]) break;
        c[a] = lo[a];
      }
      if (a == d) break;
    }
  }
  return out;
}

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (data == nullptr) throw Error("fftw_malloc failed");
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

/// In-place unnormalized DFT on a grid whose axis 0 varies fastest.
void dft_in_place(fftw_complex* data, const std::vector<int>& dims, int sign) {
  std::vector<int> reversed(dims.rbegin(), dims.rend());
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft(static_cast<int>(reversed.size()), reversed.data(), data, data, sign, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw Error("FFTW could not create a plan");
  fftw_execute(plan);
  std::lock_guard lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace

PotentialSample sample_gaussian(const EnsembleSpec& spec, const BoxSpec& box, std::uint64_t seed) {
  require_kind(spec, EnsembleKind::Gaussian, "sample_gaussian");
  const int d = box.dim();
  const double h = box.spacing();
  const double c0 = spec.covariance.c0;

  std::vector<int> torus(static_cast<std::size_t>(d));
  std::size_t modes = 1;
  for (int a = 0; a < d; ++a) {
    torus[a] = 2 * box.side(a);
    modes *= static_cast<std::size_t>(torus[a]);
  }
  auto torus_coords = [&](std::size_t idx) {
    std::array<int, kMaxDim> c{0, 0, 0};
    for (int a = 0; a < d; ++a) {
      c[a] = static_cast<int>(idx % static_cast<std::size_t>(torus[a]));
      idx /= static_cast<std::size_t>(torus[a]);
    }
    return c;
  };

  // Circulant embedding: eigenvalues of the periodized covariance matrix.
  FftwBuffer spectrum(modes);
  for (std::size_t k = 0; k < modes; ++k) {
    const auto c = torus_coords(k);
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) {
      const int m = std::min(c[a], torus[a] - c[a]);
      r2 += static_cast<double>(m) * m * h * h;
    }
    spectrum.data[k][0] = spec.covariance(std::sqrt(r2));
    spectrum.data[k][1] = 0.0;
  }
  dft_in_place(spectrum.data, torus, FFTW_FORWARD);

  double most_negative = 0.0;
  std::size_t worst_mode = 0;
  double total = 0.0;
  std::vector<double> amplitude(modes);
  for (std::size_t k = 0; k < modes; ++k) {
    double lambda = spectrum.data[k][0];
    if (lambda < most_negative) {
      most_negative = lambda;
      worst_mode = k;
    }
    if (lambda < 0.0) lambda = 0.0;
    total += lambda;
    amplitude[k] = std::sqrt(lambda / static_cast<double>(modes));
  }
  if (most_negative < -1e-12 * c0) {
    std::ostringstream msg;
    msg << "sample_gaussian: circulant embedding failed, spectral mode " << worst_mode << " has eigenvalue "
        << most_negative << " < -1e-12 C(0)";
    throw InvalidArgument(msg.str());
  }
  const double variance = total / static_cast<double>(modes);
  if (std::abs(variance - c0) > 0.01 * c0)
    throw InvalidArgument("sample_gaussian: embedded marginal variance " + format_double(variance) +
                          " deviates from C(0) by more than 1%");

  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  FftwBuffer field(modes);
  for (std::size_t k = 0; k < modes; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    field.data[k][0] = amplitude[k] * re;
    field.data[k][1] = amplitude[k] * im;
  }
  dft_in_place(field.data, torus, FFTW_BACKWARD);

  PotentialSample out = make_sample(spec, box, seed);
  for (std::size_t i = 0; i < box.site_count(); ++i) {
    const SiteCoords c = box.coords(i);
    std::size_t idx = 0;
    for (int a = d - 1; a >= 0; --a) idx = idx * static_cast<std::size_t>(torus[a]) + static_cast<std::size_t>(c[a]);
    out.values[i] = field.data[idx][0];
  }
  return out;
}

PotentialSample sample_potential(const EnsembleSpec& spec, const BoxSpec& box, std::uint64_t seed) {
  switch (spec.kind) {
    case EnsembleKind::Alloy: return sample_alloy(spec, box, seed);
    case EnsembleKind::Poisson: return sample_poisson(spec, box, seed);
    case EnsembleKind::Gaussian: return sample_gaussian(spec, box, seed);
  }
  throw InvalidArgument("sample_potential: unknown ensemble kind");
}

PotentialSample truncate(const PotentialSample& sample, double level) {
  if (!(level > 0.0)) throw InvalidArgument("truncate: level must be positive");
  PotentialSample out = sample;
  for (double& v : out.values)
    if (!(std::abs(v) < level)) v = 0.0;
  out.ensemble.truncation_level = level;
  return out;
}

int theta_for_dim(int dim) { return dim / 4 + 1; }

double profile_cell_norm_sum(const Profile& u, int dim, double q, int resolution) {
  const double r = u.support_half_width();
  const long kmax = static_cast<long>(std::ceil(r + 0.5));
  const double step = 1.0 / resolution;
  const double cell = std::pow(step, dim);
  double total = 0.0;
  std::array<long, kMaxDim> k{0, 0, 0};
  for (int a = 0; a < dim; ++a) k[a] = -kmax;
  while (true) {
    double integral = 0.0;
    std::array<int, kMaxDim> s{0, 0, 0};
    while (true) {
      Point y{0.0, 0.0, 0.0};
      for (int a = 0; a < dim; ++a) y[a] = static_cast<double>(k[a]) - 0.5 + (s[a] + 0.5) * step;
      integral += std::pow(std::abs(u(y, dim)), q) * cell;
      int a = 0;
      for (; a < dim; ++a) {
        if (++s[a] < resolution) break;
        s[a] = 0;
      }
      if (a == dim) break;
    }
    total += std::pow(integral, 1.0 / q);
    int a = 0;
    for (; a < dim; ++a) {
      if (++k[a] <= kmax) break;
      k[a] = -kmax;
    }
    if (a == dim) break;
  }
  return total;
}

namespace {

/// E[N^r] for N ~ Poisson(mean), by direct summation.
double poisson_moment(double mean, double r) {
  if (mean == 0.0) return 0.0;
  double sum = 0.0;
  double log_pk = -mean;  // log P(N = 0)
  const long kmax = static_cast<long>(mean + 40.0 * std::sqrt(mean + 1.0) + 60.0);
  for (long k = 1; k <= kmax; ++k) {
    log_pk += std::log(mean) - std::log(static_cast<double>(k));
    sum += std::exp(log_pk + r * std::log(static_cast<double>(k)));
  }
  return sum;
}

}  // namespace

MomentReport check_moment_bound(const EnsembleSpec& spec, int dim, double q, double r, std::size_t samples,
                                std::uint64_t seed, int cell_resolution) {
  if (spec.kind == EnsembleKind::Gaussian)
    throw InvalidArgument("check_moment_bound: the Gaussian ensemble is not of convolution-measure form");
  spec.validate();
  if (!(q >= 1.0) || !(r >= 1.0)) throw InvalidArgument("check_moment_bound: q and r must be >= 1");
  if (samples < 2) throw InvalidArgument("check_moment_bound: need at least 2 samples");
  if (cell_resolution < 1) throw InvalidArgument("check_moment_bound: cell_resolution must be positive");
  if (dim < 1 || dim > kMaxDim) throw InvalidArgument("check_moment_bound: unsupported dimension");

  MomentReport rep;
  rep.q = q;
  rep.r = r;
  rep.dim = dim;
  rep.samples = samples;
  rep.theta_used = theta_for_dim(dim);

  // Unit cells contain exactly one lattice point (alloy) or have unit volume (Poisson).
  rep.measure_moment = spec.kind == EnsembleKind::Alloy ? std::pow(spec.coupling.abs_moment(r), 1.0 / r)
                                                        : std::pow(poisson_moment(spec.intensity, r), 1.0 / r);
  rep.profile_sum = profile_cell_norm_sum(spec.profile, dim, q);
  rep.rhs_bound = std::pow(3.0, dim / q) * rep.measure_moment * rep.profile_sum;

  // Cell Λ(j) with j = (1,...,1) inside a box covering [0, 3)^d.
  const int s = cell_resolution;
  const BoxSpec box = BoxSpec::cube(dim, 3 * s, 1.0 / s, BoundaryCondition::Dirichlet);
  std::vector<std::size_t> cell_sites;
  for (std::size_t i = 0; i < box.site_count(); ++i) {
    const Point x = box.position(i);
    bool inside = true;
    for (int a = 0; a < dim; ++a) inside = inside && x[a] >= 0.5 && x[a] < 1.5;
    if (inside) cell_sites.push_back(i);
  }
  const double cell_volume = box.cell_volume();
  double sum = 0.0;
  double sum2 = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const PotentialSample v = sample_potential(spec, box, derive_seed(seed, k));
    double integral = 0.0;
    for (std::size_t i : cell_sites) integral += std::pow(std::abs(v.values[i]), q) * cell_volume;
    const double x = std::pow(integral, r / q);
    sum += x;
    sum2 += x * x;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0));
  const double se_mean = std::sqrt(var / n);
  rep.lhs_estimate = std::pow(mean, 1.0 / r);
  rep.lhs_stderr = mean > 0.0 ? (1.0 / r) * std::pow(mean, 1.0 / r - 1.0) * se_mean : 0.0;
  rep.violated = rep.lhs_estimate - 3.0 * rep.lhs_stderr > rep.rhs_bound;
  return rep;
}

void write_csv(std::ostream& os, const PotentialSample& sample) {
  const int d = sample.box.dim();
  for (int a = 0; a < d; ++a) os << 'x' << a << ',';
  os << "value\n";
  for (std::size_t i = 0; i < sample.values.size(); ++i) {
    const Point x = sample.box.position(i);
    for (int a = 0; a < d; ++a) os << format_double(x[a]) << ',';
    os << format_double(sample.values[i]) << '\n';
  }
}

}  // namespace idslab
