#include "idslab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>

#include "idslab/error.hpp"

namespace idslab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

inline double imag_of(double) noexcept { return 0.0; }
inline double imag_of(const cplx& z) noexcept { return z.imag(); }

template <class T>
T make_scalar(double re, double im) {
  if constexpr (std::is_same_v<T, double>) {
    (void)im;
    return re;
  } else {
    return T(re, im);
  }
}

/// Elementary reflector H = I - tau v v^† with H^† (alpha, x)^T = (beta, 0)^T, beta real.
/// On return alpha holds beta and x holds v(1:), v(0) = 1 implied.
template <class T>
T make_reflector(T& alpha, std::span<T> x) {
  double xnorm2 = 0.0;
  for (const T& v : x) xnorm2 += abs2_of(v);
  const double ar = real_of(alpha);
  const double ai = imag_of(alpha);
  if (xnorm2 == 0.0 && ai == 0.0) return T{};
  const double beta = -std::copysign(std::sqrt(ar * ar + ai * ai + xnorm2), ar);
  const T tau = make_scalar<T>((beta - ar) / beta, -ai / beta);
  const T scale = T{1} / (alpha - T{beta});
  for (T& v : x) v *= scale;
  alpha = T{beta};
  return tau;
}

template <class T>
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // off[i] couples i and i+1; size n, last entry 0
  std::vector<T> tau;
};

/// Reduces the Hermitian matrix (lower triangle referenced) to real symmetric tridiagonal
/// form A = Q T Q^†, Q = H_0 H_1 ... H_{n-2}. The reflector vectors are left in the strictly
/// lower part of column i of `a`.
template <class T>
Tridiagonal<T> tridiagonalize(DenseMatrix<T>& a) {
  const std::size_t n = a.rows();
  Tridiagonal<T> t;
  t.diag.assign(n, 0.0);
  t.off.assign(n, 0.0);
  t.tau.assign(n > 0 ? n - 1 : 0, T{});
  std::vector<T> v(n);
  std::vector<T> x(n);

  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t m = n - i - 1;
    for (std::size_t k = 0; k < m; ++k) v[k] = a(i + 1 + k, i);
    T alpha = v[0];
    const T tau = make_reflector<T>(alpha, std::span<T>(v.data() + 1, m - 1));
    t.off[i] = real_of(alpha);

    if (tau != T{}) {
      v[0] = T{1};
      std::fill(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(m), T{});
      // x = tau * Â v using the lower triangle of the trailing block.
      for (std::size_t r = 0; r < m; ++r) {
        T* row = &a(i + 1 + r, i + 1);
        const T vr = v[r];
        T sum{};
        for (std::size_t c = 0; c < r; ++c) {
          sum += row[c] * v[c];
          x[c] += conj_of(row[c]) * vr;
        }
        x[r] += sum + real_of(row[r]) * vr;
      }
      T dot{};
      for (std::size_t k = 0; k < m; ++k) {
        x[k] *= tau;
        dot += conj_of(x[k]) * v[k];
      }
      const T shift = -0.5 * tau * dot;
      for (std::size_t k = 0; k < m; ++k) x[k] += shift * v[k];
      // Â -= v x^† + x v^†
      for (std::size_t r = 0; r < m; ++r) {
        T* row = &a(i + 1 + r, i + 1);
        const T vr = v[r];
        const T xr = x[r];
        for (std::size_t c = 0; c <= r; ++c) row[c] -= vr * conj_of(x[c]) + xr * conj_of(v[c]);
        row[r] = T{real_of(row[r])};
      }
    }
    v[0] = T{1};
    for (std::size_t k = 0; k < m; ++k) a(i + 1 + k, i) = v[k];
    t.tau[i] = tau;
    t.diag[i] = real_of(a(i, i));
  }
  if (n > 0) t.diag[n - 1] = real_of(a(n - 1, n - 1));
  return t;
}

/// Q = H_0 H_1 ... H_{n-2} from the reflectors stored by tridiagonalize.
template <class T>
DenseMatrix<T> form_q(const DenseMatrix<T>& a, const std::vector<T>& tau) {
  const std::size_t n = a.rows();
  DenseMatrix<T> q = DenseMatrix<T>::identity(n);
  std::vector<T> w(n);
  for (std::size_t ii = tau.size(); ii-- > 0;) {
    const T t = tau[ii];
    if (t == T{}) continue;
    const std::size_t lo = ii + 1;
    const std::size_t m = n - lo;
    std::fill(w.begin(), w.end(), T{});
    for (std::size_t r = 0; r < m; ++r) {
      const T vr = conj_of(a(lo + r, ii));
      const T* qrow = &q(lo + r, lo);
      for (std::size_t c = 0; c < m; ++c) w[c] += vr * qrow[c];
    }
    for (std::size_t r = 0; r < m; ++r) {
      const T f = t * a(lo + r, ii);
      T* qrow = &q(lo + r, lo);
      for (std::size_t c = 0; c < m; ++c) qrow[c] -= f * w[c];
    }
  }
  return q;
}

/// Implicit-shift QL on the symmetric tridiagonal (diag, off). When `zt` is given its rows
/// are rotated along, so that row k ends up as the eigenvector of diag[k] if zt started as I.
void tridiagonal_ql(std::vector<double>& diag, std::vector<double>& off, RealMatrix* zt) {
  const std::size_t n = diag.size();
  if (n == 0) return;
  off[n - 1] = 0.0;
  constexpr int kMaxIterations = 60;
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
        if (std::abs(off[m]) <= kEps * dd) break;
      }
      if (m != l) {
        if (iter++ == kMaxIterations)
          throw ConvergenceError("eigenvalues: QL iteration did not converge for eigenvalue " + std::to_string(l), l);
        double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
        double r = std::hypot(g, 1.0);
        g = diag[m] - diag[l] + off[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        std::size_t i = m;
        bool deflated = false;
        while (i-- > l) {
          double f = s * off[i];
          const double b = c * off[i];
          r = std::hypot(f, g);
          off[i + 1] = r;
          if (r == 0.0) {
            diag[i + 1] -= p;
            off[m] = 0.0;
            deflated = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = diag[i + 1] - p;
          r = (diag[i] - g) * s + 2.0 * c * b;
          p = s * r;
          diag[i + 1] = g + p;
          g = c * r - b;
          if (zt != nullptr) {
            double* zi = &(*zt)(i, 0);
            double* zi1 = &(*zt)(i + 1, 0);
            for (std::size_t k = 0; k < n; ++k) {
              f = zi1[k];
              zi1[k] = s * zi[k] + c * f;
              zi[k] = c * zi[k] - s * f;
            }
          }
        }
        if (deflated) continue;
        diag[l] -= p;
        off[l] = g;
        off[m] = 0.0;
      }
    } while (m != l);
  }
}

/// Solves (T - shift) x = b for the symmetric tridiagonal T by Gaussian elimination with
/// partial pivoting. Zero pivots are replaced by `tiny`.
std::vector<double> tridiagonal_solve(const std::vector<double>& diag, const std::vector<double>& off,
                                      double shift, std::vector<double> b, double tiny) {
  const std::size_t n = diag.size();
  std::vector<double> d(n), dl(off.begin(), off.begin() + static_cast<std::ptrdiff_t>(n - 1)),
      du(off.begin(), off.begin() + static_cast<std::ptrdiff_t>(n - 1)), du2(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i] = diag[i] - shift;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = tiny;
      const double fact = dl[i] / d[i];
      d[i + 1] -= fact * du[i];
      b[i + 1] -= fact * b[i];
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      const double temp = d[i + 1];
      d[i + 1] = du[i] - fact * temp;
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du2[i];
      }
      du[i] = temp;
      std::swap(b[i], b[i + 1]);
      b[i + 1] -= fact * b[i];
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = tiny;
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    if (i + 1 < n) s -= du[i] * x[i + 1];
    if (i + 2 < n) s -= du2[i] * x[i + 2];
    x[i] = s / d[i];
  }
  return x;
}

/// Residual of inverse-iteration vectors of T at the lowest, middle and highest eigenvalue.
double tridiagonal_residual(const std::vector<double>& diag, const std::vector<double>& off,
                            const std::vector<double>& sorted) {
  const std::size_t n = diag.size();
  if (n == 1) return 0.0;
  double tnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(diag[i]);
    if (i > 0) row += std::abs(off[i - 1]);
    if (i + 1 < n) row += std::abs(off[i]);
    tnorm = std::max(tnorm, row);
  }
  if (tnorm == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t k : {std::size_t{0}, n / 2, n - 1}) {
    const double lambda = sorted[k];
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.1 * static_cast<double>((i * 7919) % 13);
    for (int it = 0; it < 3; ++it) {
      x = tridiagonal_solve(diag, off, lambda, std::move(x), kEps * tnorm);
      double nrm = 0.0;
      for (double v : x) nrm += v * v;
      nrm = std::sqrt(nrm);
      if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
      for (double& v : x) v /= nrm;
    }
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double tx = diag[i] * x[i];
      if (i > 0) tx += off[i - 1] * x[i - 1];
      if (i + 1 < n) tx += off[i] * x[i + 1];
      const double ri = tx - lambda * x[i];
      res += ri * ri;
    }
    worst = std::max(worst, std::sqrt(res) / tnorm);
  }
  return worst;
}

void check_input(const ComplexMatrix& h) {
  if (!h.square() || h.rows() == 0) throw InvalidArgument("eigenvalues: matrix must be square and non-empty");
  for (const cplx& z : h.values())
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw InvalidArgument("eigenvalues: matrix has non-finite entries");
}

template <class T>
DenseMatrix<T> convert(const ComplexMatrix& h) {
  if constexpr (std::is_same_v<T, double>) {
    return real_part(h);
  } else {
    return h;
  }
}

template <class T>
Spectrum eigenvalues_impl(const ComplexMatrix& h) {
  DenseMatrix<T> a = convert<T>(h);
  Tridiagonal<T> t = tridiagonalize(a);
  std::vector<double> d = t.diag;
  std::vector<double> e = t.off;
  tridiagonal_ql(d, e, nullptr);
  std::sort(d.begin(), d.end());
  Spectrum s;
  s.source_dim = h.rows();
  s.scale = norm_proxy(h);
  s.residual_bound = tridiagonal_residual(t.diag, t.off, d);
  s.eigenvalues = std::move(d);
  return s;
}

double inf_norm(const ComplexMatrix& h) {
  double m = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    double row = 0.0;
    for (const cplx& z : h.row(i)) row += std::abs(z);
    m = std::max(m, row);
  }
  return m;
}

template <class T>
EigenDecomposition decomposition_impl(const ComplexMatrix& h) {
  const std::size_t n = h.rows();
  DenseMatrix<T> a = convert<T>(h);
  Tridiagonal<T> t = tridiagonalize(a);
  const DenseMatrix<T> q = form_q(a, t.tau);
  RealMatrix zt = RealMatrix::identity(n);
  std::vector<double> d = t.diag;
  std::vector<double> e = t.off;
  tridiagonal_ql(d, e, &zt);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });

  EigenDecomposition out;
  out.spectrum.source_dim = n;
  out.spectrum.scale = norm_proxy(h);
  out.spectrum.eigenvalues.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.spectrum.eigenvalues[k] = d[src];
    const double* z = &zt(src, 0);
    auto vk = out.vectors.row(k);
    for (std::size_t i = 0; i < n; ++i) {
      const T* qi = &q(i, 0);
      T acc{};
      for (std::size_t j = 0; j < n; ++j) acc += qi[j] * z[j];
      vk[i] = cplx(acc);
    }
  }

  const double hn = inf_norm(h);
  double worst = 0.0;
  if (hn > 0.0) {
    for (std::size_t k : {std::size_t{0}, n / 2, n - 1}) {
      auto vk = out.vectors.row(k);
      double res = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        cplx hv{};
        auto hi = h.row(i);
        for (std::size_t j = 0; j < n; ++j) hv += hi[j] * vk[j];
        res += std::norm(hv - out.spectrum.eigenvalues[k] * vk[i]);
      }
      worst = std::max(worst, std::sqrt(res) / hn);
    }
  }
  out.spectrum.residual_bound = worst;
  return out;
}

/// Negative eigenvalue count of the Hermitian matrix held in the lower triangle of `a`,
/// by Bunch-Kaufman diagonal pivoting.
template <class T>
std::size_t negative_inertia(DenseMatrix<T>& a, double tol, double suggested_shift) {
  const std::size_t n = a.rows();
  const double alpha = (1.0 + std::sqrt(17.0)) / 8.0;
  std::vector<T> c1(n);
  std::vector<T> c2(n);
  std::size_t negatives = 0;

  auto get = [&](std::size_t i, std::size_t j) -> T { return i >= j ? a(i, j) : conj_of(a(j, i)); };
  auto set = [&](std::size_t i, std::size_t j, T v) {
    if (i >= j)
      a(i, j) = v;
    else
      a(j, i) = conj_of(v);
  };
  auto fail = [&](std::size_t k) {
    throw NearEigenvalueError("count_below_inertia: near-singular pivot at step " + std::to_string(k) +
                                  "; retry with the energy shifted by " + std::to_string(suggested_shift),
                              suggested_shift);
  };

  std::size_t k = 0;
  while (k < n) {
    const double absakk = std::abs(real_of(a(k, k)));
    std::size_t imax = k;
    double colmax = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::sqrt(abs2_of(a(i, k)));
      if (v > colmax) {
        colmax = v;
        imax = i;
      }
    }
    if (std::max(absakk, colmax) <= tol) fail(k);

    std::size_t kstep = 1;
    std::size_t kp = k;
    if (absakk < alpha * colmax) {
      double rowmax = 0.0;
      for (std::size_t j = k; j < n; ++j)
        if (j != imax) rowmax = std::max(rowmax, std::sqrt(abs2_of(get(imax, j))));
      if (absakk >= alpha * colmax * (colmax / rowmax)) {
        kp = k;
      } else if (std::abs(real_of(a(imax, imax))) >= alpha * rowmax) {
        kp = imax;
      } else {
        kp = imax;
        kstep = 2;
      }
    }

    const std::size_t kk = k + kstep - 1;
    if (kp != kk) {
      for (std::size_t t = k; t < n; ++t) {
        if (t == kk || t == kp) continue;
        const T vk = get(kk, t);
        const T vp = get(kp, t);
        set(kk, t, vp);
        set(kp, t, vk);
      }
      std::swap(a(kk, kk), a(kp, kp));
      a(kp, kk) = conj_of(a(kp, kk));
    }

    if (kstep == 1) {
      const double d = real_of(a(k, k));
      if (std::abs(d) <= tol) fail(k);
      if (d < 0.0) ++negatives;
      for (std::size_t i = k + 1; i < n; ++i) c1[i] = a(i, k);
      for (std::size_t i = k + 1; i < n; ++i) {
        const T f = c1[i] / d;
        if (f == T{}) continue;
        T* row = &a(i, 0);
        for (std::size_t j = k + 1; j <= i; ++j) row[j] -= f * conj_of(c1[j]);
      }
    } else {
      const double a11 = real_of(a(k, k));
      const double a22 = real_of(a(k + 1, k + 1));
      const T a21 = a(k + 1, k);
      const double det = a11 * a22 - abs2_of(a21);
      if (det == 0.0) fail(k);
      if (det < 0.0)
        negatives += 1;
      else if (a11 + a22 < 0.0)
        negatives += 2;
      for (std::size_t i = k + 2; i < n; ++i) {
        c1[i] = a(i, k);
        c2[i] = a(i, k + 1);
      }
      for (std::size_t i = k + 2; i < n; ++i) {
        const T w1 = (c1[i] * a22 - c2[i] * a21) / det;
        const T w2 = (c2[i] * a11 - c1[i] * conj_of(a21)) / det;
        T* row = &a(i, 0);
        for (std::size_t j = k + 2; j <= i; ++j) row[j] -= w1 * conj_of(c1[j]) + w2 * conj_of(c2[j]);
      }
    }
    k += kstep;
  }
  return negatives;
}

template <class T>
std::size_t inertia_impl(const ComplexMatrix& h, double energy) {
  DenseMatrix<T> a = convert<T>(h);
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) -= T{energy};
  const double scale = norm_proxy(h);
  return negative_inertia(a, kTieTolerance * scale, 1e-10 * scale);
}

}  // namespace

Spectrum eigenvalues(const ComplexMatrix& h) {
  check_input(h);
  return is_real(h) ? eigenvalues_impl<double>(h) : eigenvalues_impl<cplx>(h);
}

Spectrum eigenvalues(const HermitianOperator& op) {
  return op.is_real() ? eigenvalues_impl<double>(op.matrix()) : eigenvalues_impl<cplx>(op.matrix());
}

EigenDecomposition eigen_decomposition(const ComplexMatrix& h) {
  check_input(h);
  return is_real(h) ? decomposition_impl<double>(h) : decomposition_impl<cplx>(h);
}

EigenDecomposition eigen_decomposition(const HermitianOperator& op) {
  return op.is_real() ? decomposition_impl<double>(op.matrix()) : decomposition_impl<cplx>(op.matrix());
}

std::size_t count_below(const Spectrum& spectrum, double energy) {
  const double threshold = energy - kTieTolerance * spectrum.scale;
  return static_cast<std::size_t>(
      std::lower_bound(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end(), threshold) -
      spectrum.eigenvalues.begin());
}

std::vector<std::size_t> count_below(const Spectrum& spectrum, const std::vector<double>& energies) {
  std::vector<std::size_t> out;
  out.reserve(energies.size());
  for (double e : energies) out.push_back(count_below(spectrum, e));
  return out;
}

std::size_t count_below_inertia(const ComplexMatrix& h, double energy) {
  check_input(h);
  if (!std::isfinite(energy)) throw InvalidArgument("count_below_inertia: energy must be finite");
  return is_real(h) ? inertia_impl<double>(h, energy) : inertia_impl<cplx>(h, energy);
}

std::size_t count_below_inertia(const HermitianOperator& op, double energy) {
  if (!std::isfinite(energy)) throw InvalidArgument("count_below_inertia: energy must be finite");
  return op.is_real() ? inertia_impl<double>(op.matrix(), energy) : inertia_impl<cplx>(op.matrix(), energy);
}

namespace {

ComplexMatrix spectral_sum(const EigenDecomposition& eig, const std::vector<double>& weights) {
  const std::size_t n = eig.vectors.rows();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = weights[k];
    if (w == 0.0) continue;
    auto v = eig.vectors.row(k);
    for (std::size_t i = 0; i < n; ++i) {
      const cplx f = w * v[i];
      auto row = out.row(i);
      for (std::size_t j = 0; j < n; ++j) row[j] += f * std::conj(v[j]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    out(i, i) = cplx(out(i, i).real(), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) out(j, i) = std::conj(out(i, j));
  }
  return out;
}

}  // namespace

ComplexMatrix heat_kernel(const EigenDecomposition& eig, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("heat_kernel: t must be positive");
  std::vector<double> w;
  w.reserve(eig.spectrum.eigenvalues.size());
  for (double lambda : eig.spectrum.eigenvalues) w.push_back(std::exp(-t * lambda));
  return spectral_sum(eig, w);
}

ComplexMatrix heat_kernel(const ComplexMatrix& h, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("heat_kernel: t must be positive");
  return heat_kernel(eigen_decomposition(h), t);
}

ComplexMatrix heat_kernel(const HermitianOperator& op, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("heat_kernel: t must be positive");
  return heat_kernel(eigen_decomposition(op), t);
}

void require_separated(const Spectrum& spectrum, double energy) {
  const double tol = kTieTolerance * spectrum.scale;
  auto it = std::lower_bound(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end(), energy - tol);
  if (it != spectrum.eigenvalues.end() && *it <= energy + tol)
    throw NearEigenvalueError("spectral projector: energy " + std::to_string(energy) +
                                  " is within 1e-12 ||H|| of an eigenvalue; perturb it",
                              1e-9 * spectrum.scale);
}

ComplexMatrix spectral_projector(const EigenDecomposition& eig, double energy) {
  require_separated(eig.spectrum, energy);
  std::vector<double> w;
  w.reserve(eig.spectrum.eigenvalues.size());
  for (double lambda : eig.spectrum.eigenvalues) w.push_back(lambda < energy ? 1.0 : 0.0);
  return spectral_sum(eig, w);
}

ComplexMatrix spectral_projector(const ComplexMatrix& h, double energy) {
  return spectral_projector(eigen_decomposition(h), energy);
}

ComplexMatrix spectral_projector(const HermitianOperator& op, double energy) {
  return spectral_projector(eigen_decomposition(op), energy);
}

}  // namespace idslab
