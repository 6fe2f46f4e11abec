#include <doctest.h>

#include <numeric>
#include <random>

#include "idslab/error.hpp"
#include "idslab/spectral.hpp"
#include "oracles.hpp"

using namespace idslab;

TEST_SUITE("spectral") {
  TEST_CASE("random Hermitian matrices match Sturm bisection") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 1 + trial % 24;
      const auto h = oracle::random_hermitian(n, rng, trial % 3 == 0);
      const auto s = eigenvalues(h);
      const double scale = norm_proxy(h);
      const auto ref = oracle::bisection_eigenvalues(h, 1e-12 * scale);
      CHECK(oracle::max_abs_diff(s.eigenvalues, ref) < 1e-9 * scale);
      CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
    }
  }

  TEST_CASE("eigenvalues are roots of the characteristic polynomial") {
    std::mt19937_64 rng(7);
    const auto h = oracle::random_hermitian(6, rng);
    const auto c = oracle::characteristic_polynomial(h);
    const auto s = eigenvalues(h);
    for (double l : s.eigenvalues) {
      // |p(λ)| relative to the size of p'(λ) ~ Π |λ - μ|
      double deriv = 1;
      for (double m : s.eigenvalues)
        if (m != l) deriv *= std::abs(l - m);
      CHECK(std::abs(oracle::polyval(c, l)) < 1e-10 * std::max(deriv, 1.0));
    }
    double prod = 1;
    for (double l : s.eigenvalues) prod *= l;
    CHECK(std::abs(c[0] - prod) < 1e-10 * std::max(1.0, std::abs(prod)));
  }

  TEST_CASE("trace identities") {
    std::mt19937_64 rng(9);
    const auto h = oracle::random_hermitian(40, rng);
    const auto s = eigenvalues(h);
    double tr = 0, tr2 = 0;
    for (std::size_t i = 0; i < 40; ++i) {
      tr += h(i, i).real();
      for (std::size_t j = 0; j < 40; ++j) tr2 += std::norm(h(i, j));
    }
    double sum = 0, sum2 = 0;
    for (double l : s.eigenvalues) {
      sum += l;
      sum2 += l * l;
    }
    CHECK(std::abs(sum - tr) < 1e-10 * std::max(1.0, std::abs(tr)) + 1e-12 * norm_proxy(h));
    CHECK(std::abs(sum2 - tr2) < 1e-10 * tr2);
  }

  TEST_CASE("eigenvectors are orthonormal with small residuals") {
    std::mt19937_64 rng(10);
    for (bool real : {false, true}) {
      const auto h = oracle::random_hermitian(30, rng, real);
      const auto eig = eigen_decomposition(h);
      const std::size_t n = 30;
      for (std::size_t k = 0; k < n; ++k) {
        double res = 0;
        for (std::size_t i = 0; i < n; ++i) {
          cplx s = 0;
          for (std::size_t j = 0; j < n; ++j) s += h(i, j) * eig.vectors(k, j);
          res += std::norm(s - eig.spectrum.eigenvalues[k] * eig.vectors(k, i));
        }
        CHECK(std::sqrt(res) < 1e-12 * norm_proxy(h));
        for (std::size_t l = k; l < n; ++l) {
          cplx dot = 0;
          for (std::size_t i = 0; i < n; ++i) dot += std::conj(eig.vectors(k, i)) * eig.vectors(l, i);
          CHECK(std::abs(dot - (k == l ? 1.0 : 0.0)) < 1e-12);
        }
      }
      CHECK(eig.spectrum.residual_bound < 1e-13);
    }
  }

  TEST_CASE("degenerate and trivial matrices") {
    auto id = ComplexMatrix::identity(5);
    for (double l : eigenvalues(id).eigenvalues) CHECK(l == doctest::Approx(1.0));
    ComplexMatrix one(1, 1);
    one(0, 0) = -2.5;
    CHECK(eigenvalues(one).eigenvalues == std::vector<double>{-2.5});
    ComplexMatrix z(4, 4);
    for (double l : eigenvalues(z).eigenvalues) CHECK(l == 0.0);
  }

  TEST_CASE("count_below is left-continuous with a tie tolerance") {
    ComplexMatrix d(3, 3);
    d(0, 0) = 0.0;
    d(1, 1) = 1.0;
    d(2, 2) = 2.0;
    const auto s = eigenvalues(d);
    CHECK(count_below(s, 1.0) == 1);
    CHECK(count_below(s, 1.0 + 1e-15) == 1);
    CHECK(count_below(s, 1.0 + 1e-6) == 2);
    CHECK(count_below(s, -1.0) == 0);
    CHECK(count_below(s, 10.0) == 3);
    CHECK(count_below(s, std::vector<double>{-1.0, 0.5, 1.5, 3.0}) == std::vector<std::size_t>{0, 1, 2, 3});
  }

  TEST_CASE("inertia count agrees with the spectrum") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-6, 6);
    for (int trial = 0; trial < 20; ++trial) {
      const auto h = oracle::random_hermitian(25, rng, trial % 2 == 0);
      const auto s = eigenvalues(h);
      for (int k = 0; k < 5; ++k) {
        const double e = u(rng);
        CHECK(count_below_inertia(h, e) == count_below(s, e));
      }
    }
  }

  TEST_CASE("inertia at an eigenvalue reports a suggested shift") {
    ComplexMatrix d(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 3.0;
    try {
      count_below_inertia(d, 1.0);
      FAIL("expected NearEigenvalueError");
    } catch (const NearEigenvalueError& e) {
      CHECK(e.suggested_shift() > 0.0);
      CHECK(count_below_inertia(d, 1.0 + e.suggested_shift()) == 1);
    }
  }

  TEST_CASE("heat kernel matches a Taylor-series exponential") {
    std::mt19937_64 rng(13);
    const auto h = oracle::random_hermitian(12, rng);
    for (double t : {0.1, 0.5, 2.0}) {
      const auto ref = oracle::expm_taylor(h, t);
      CHECK(max_abs_difference(heat_kernel(h, t), ref) < 1e-11 * max_abs(ref));
    }
    CHECK_THROWS_AS(heat_kernel(h, 0.0), InvalidArgument);
  }

  TEST_CASE("spectral projector is an orthogonal projector of the right rank") {
    std::mt19937_64 rng(14);
    const auto h = oracle::random_hermitian(20, rng);
    const auto s = eigenvalues(h);
    const double e = 0.5 * (s.eigenvalues[8] + s.eigenvalues[9]);
    const auto p = spectral_projector(h, e);
    CHECK(hermiticity_defect(p) < 1e-14);
    CHECK(max_abs_difference(multiply(p, p), p) < 1e-12);
    double tr = 0;
    for (std::size_t i = 0; i < 20; ++i) tr += p(i, i).real();
    CHECK(tr == doctest::Approx(9.0).epsilon(1e-12));
    CHECK_THROWS_AS(spectral_projector(h, s.eigenvalues[3]), NearEigenvalueError);
  }
}
