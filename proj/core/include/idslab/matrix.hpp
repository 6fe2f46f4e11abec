#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace idslab {

using cplx = std::complex<double>;

/// Row-major dense matrix with value semantics.
template <class T>
class DenseMatrix {
 public:
  using value_type = T;

  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }
  std::span<const T> values() const noexcept { return data_; }

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RealMatrix = DenseMatrix<double>;
using ComplexMatrix = DenseMatrix<cplx>;

inline double conj_of(double x) noexcept { return x; }
inline cplx conj_of(const cplx& z) noexcept { return std::conj(z); }
inline double real_of(double x) noexcept { return x; }
inline double real_of(const cplx& z) noexcept { return z.real(); }
inline double abs2_of(double x) noexcept { return x * x; }
inline double abs2_of(const cplx& z) noexcept { return z.real() * z.real() + z.imag() * z.imag(); }

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix adjoint(const ComplexMatrix& a);
double max_abs(const ComplexMatrix& a);
double max_abs_difference(const ComplexMatrix& a, const ComplexMatrix& b);
/// max_ij |a(i,j) - conj(a(j,i))|; zero for an exactly Hermitian matrix.
double hermiticity_defect(const ComplexMatrix& a);
/// Norm proxy used for tie tolerances: max |entry| times n.
double norm_proxy(const ComplexMatrix& a);
bool is_real(const ComplexMatrix& a);
RealMatrix real_part(const ComplexMatrix& a);

}  // namespace idslab
