#include "idslab/operator.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <utility>

#include "idslab/error.hpp"

namespace idslab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Σ_jk z_j B_jk a_k
double bilinear(const MagneticField& field, const Point& z, const Point& a) {
  double s = 0.0;
  for (int j = 0; j < field.dim(); ++j)
    for (int k = 0; k < field.dim(); ++k) s += z[j] * field(j, k) * a[k];
  return s;
}

Point to_point(const SiteCoords& c, int dim, double h) {
  Point x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) x[a] = c[a] * h;
  return x;
}

/// Reduces an unwrapped lattice point into the torus. Returns the site index and the factor f
/// with ψ(w) = f ψ(w') implied by the magnetic-periodic condition ψ(z + a) = e^{-(i/2) z·Ba} ψ(z)
/// for every torus period a = L_m h e_m.
std::pair<std::size_t, cplx> wrap_site(const BoxSpec& box, const MagneticField& field, SiteCoords w) {
  const int d = box.dim();
  const double h = box.spacing();
  double phase = 0.0;
  for (int m = 0; m < d; ++m) {
    const int l = box.side(m);
    Point a{0.0, 0.0, 0.0};
    a[m] = l * h;
    while (w[m] >= l) {
      w[m] -= l;
      phase -= 0.5 * bilinear(field, to_point(w, d, h), a);
    }
    while (w[m] < 0) {
      phase += 0.5 * bilinear(field, to_point(w, d, h), a);
      w[m] += l;
    }
  }
  return {box.index(w), std::polar(1.0, phase)};
}

bool near_integer(double x) { return std::abs(x - std::round(x)) <= 1e-9 * std::max(1.0, std::abs(x)); }

void require_finite(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i]))
      throw InvalidArgument(std::string(what) + ": non-finite entry at site " + std::to_string(i));
}

}  // namespace

HermitianOperator::HermitianOperator(ComplexMatrix matrix, BoxSpec box)
    : matrix_(std::move(matrix)), box_(std::move(box)) {
  if (!matrix_.square() || matrix_.rows() != box_.site_count())
    throw InvalidArgument("operator: matrix dimension " + std::to_string(matrix_.rows()) +
                          " does not match the box site count " + std::to_string(box_.site_count()));
  for (const cplx& z : matrix_.values())
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw InvalidArgument("operator: matrix has non-finite entries");
  if (hermiticity_defect(matrix_) != 0.0) throw InvalidArgument("operator: matrix is not Hermitian");
  real_ = idslab::is_real(matrix_);
  norm_ = norm_proxy(matrix_);
}

HermitianOperator HermitianOperator::from_matrix(ComplexMatrix matrix) {
  BoxSpec box({static_cast<int>(matrix.rows())}, 1.0, BoundaryCondition::Dirichlet);
  return HermitianOperator(std::move(matrix), std::move(box));
}

std::string flux_commensurability_error(const BoxSpec& box, const MagneticField& field, bool per_side) {
  if (field.dim() != box.dim()) return "field dimension does not match the box dimension";
  const double h2 = box.spacing() * box.spacing();
  for (int j = 0; j < box.dim(); ++j)
    for (int k = j + 1; k < box.dim(); ++k) {
      const double b = field(j, k);
      if (b == 0.0) continue;
      const long lj = box.side(j);
      const long lk = box.side(k);
      std::ostringstream msg;
      if (per_side) {
        if (!near_integer(b * h2 * static_cast<double>(lj) / kTwoPi) ||
            !near_integer(b * h2 * static_cast<double>(lk) / kTwoPi)) {
          const double quantum = kTwoPi / (h2 * static_cast<double>(std::gcd(lj, lk)));
          msg << "incommensurate flux: B_" << j << k << " must be a multiple of " << quantum
              << " (2*pi / (h^2 gcd(L_" << j << ", L_" << k << "))), nearest is "
              << quantum * std::round(b / quantum);
          return msg.str();
        }
      } else if (!near_integer(b * h2 * static_cast<double>(lj * lk) / kTwoPi)) {
        const double quantum = kTwoPi / (h2 * static_cast<double>(lj * lk));
        msg << "incommensurate flux: B_" << j << k << " must be a multiple of " << quantum
            << " (2*pi / (h^2 L_" << j << " L_" << k << ")), nearest is " << quantum * std::round(b / quantum);
        return msg.str();
      }
    }
  return {};
}

HermitianOperator build_hamiltonian(const BoxSpec& box, const MagneticField& field,
                                    std::span<const double> potential) {
  const std::size_t n = box.site_count();
  const int d = box.dim();
  if (potential.size() != n)
    throw InvalidArgument("build_hamiltonian: potential has " + std::to_string(potential.size()) +
                          " entries, box has " + std::to_string(n) + " sites");
  require_finite(potential, "build_hamiltonian: potential");
  if (field.dim() != d) throw InvalidArgument("build_hamiltonian: field dimension does not match box");
  const bool periodic = box.bc() == BoundaryCondition::Periodic;
  if (periodic) {
    if (auto err = flux_commensurability_error(box, field, false); !err.empty())
      throw InvalidArgument("build_hamiltonian: " + err);
  }

  const double h = box.spacing();
  const double hop = 1.0 / (2.0 * h * h);
  ComplexMatrix m(n, n);
  std::vector<int> coordination(n, 0);

  for (std::size_t i = 0; i < n; ++i) {
    const SiteCoords c = box.coords(i);
    const Point x = box.position(i);
    for (int axis = 0; axis < d; ++axis) {
      SiteCoords w = c;
      ++w[axis];
      const cplx bond = -hop * std::polar(1.0, field.bond_phase(x, axis, h));
      std::size_t j;
      cplx value;
      if (w[axis] < box.side(axis)) {
        j = box.index(w);
        value = bond;
      } else if (periodic) {
        auto [wrapped, factor] = wrap_site(box, field, w);
        j = wrapped;
        value = bond * factor;
      } else {
        continue;
      }
      m(i, j) += value;
      m(j, i) += std::conj(value);
      ++coordination[i];
      ++coordination[j];
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double kinetic =
        box.bc() == BoundaryCondition::Neumann ? coordination[i] * hop : static_cast<double>(d) / (h * h);
    m(i, i) = cplx(kinetic + potential[i], 0.0);
  }
  return HermitianOperator(std::move(m), box);
}

HermitianOperator gauge_transform(const HermitianOperator& op, std::span<const double> chi) {
  const std::size_t n = op.dim();
  if (chi.size() != n)
    throw InvalidArgument("gauge_transform: chi has " + std::to_string(chi.size()) + " entries, operator has " +
                          std::to_string(n) + " sites");
  require_finite(chi, "gauge_transform: chi");
  std::vector<cplx> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = std::polar(1.0, chi[i]);
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = op(i, i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx hij = op(i, j);
      if (hij == cplx{}) continue;
      const cplx v = std::conj(u[i]) * hij * u[j];
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
  }
  return HermitianOperator(std::move(m), op.box());
}

HermitianOperator magnetic_translate(const HermitianOperator& op, const MagneticField& field,
                                     std::span<const int> shift) {
  const BoxSpec& box = op.box();
  const int d = box.dim();
  if (box.bc() != BoundaryCondition::Periodic)
    throw InvalidArgument("magnetic_translate: requires a periodic box");
  if (static_cast<int>(shift.size()) != d)
    throw InvalidArgument("magnetic_translate: shift dimension does not match box");
  if (auto err = flux_commensurability_error(box, field, true); !err.empty())
    throw InvalidArgument("magnetic_translate: " + err);

  const std::size_t n = op.dim();
  const double h = box.spacing();
  Point s{0.0, 0.0, 0.0};
  for (int a = 0; a < d; ++a) s[a] = shift[a] * h;

  // (T ψ)_i = t_i ψ_{source_i}
  std::vector<std::size_t> source(n);
  std::vector<cplx> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    SiteCoords w = box.coords(i);
    for (int a = 0; a < d; ++a) w[a] -= shift[a];
    auto [j, factor] = wrap_site(box, field, w);
    source[i] = j;
    t[i] = std::polar(1.0, -0.5 * bilinear(field, box.position(i), s)) * factor;
  }
  std::vector<std::size_t> inverse(n);
  for (std::size_t i = 0; i < n; ++i) inverse[source[i]] = i;

  ComplexMatrix m(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t ia = inverse[a];
    m(a, a) = cplx(op(ia, ia).real(), 0.0);
    for (std::size_t b = a + 1; b < n; ++b) {
      const std::size_t ib = inverse[b];
      const cplx hij = op(ia, ib);
      if (hij == cplx{}) continue;
      const cplx v = std::conj(t[ia]) * hij * t[ib];
      m(a, b) = v;
      m(b, a) = std::conj(v);
    }
  }
  return HermitianOperator(std::move(m), box);
}

}  // namespace idslab
