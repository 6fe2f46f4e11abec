#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "idslab/error.hpp"
#include "idslab/operator.hpp"
#include "idslab/spectral.hpp"
#include "oracles.hpp"

using namespace idslab;

namespace {

std::vector<double> random_values(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_SUITE("operator") {
  TEST_CASE("two-site Dirichlet chain") {
    const BoxSpec box({2}, 1.0, BoundaryCondition::Dirichlet);
    const auto op = build_hamiltonian(box, MagneticField::zero(1), std::vector<double>{0.0, 0.0});
    CHECK(op(0, 0) == cplx(1.0, 0.0));
    CHECK(op(0, 1) == cplx(-0.5, 0.0));
    const auto s = eigenvalues(op);
    CHECK(s.eigenvalues[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(s.eigenvalues[1] == doctest::Approx(1.5).epsilon(1e-14));
  }

  TEST_CASE("free chains match closed-form spectra") {
    for (auto [bc, expected] : {std::pair{BoundaryCondition::Dirichlet, oracle::chain_dirichlet(9, 0.5)},
                                std::pair{BoundaryCondition::Neumann, oracle::chain_neumann(9, 0.5)},
                                std::pair{BoundaryCondition::Periodic, oracle::chain_periodic(9, 0.5)}}) {
      const BoxSpec box({9}, 0.5, bc);
      const auto s = eigenvalues(build_hamiltonian(box, MagneticField::zero(1), std::vector<double>(9, 0.0)));
      CHECK(oracle::max_abs_diff(s.eigenvalues, expected) < 1e-12);
    }
  }

  TEST_CASE("2D Dirichlet box is separable") {
    const BoxSpec box({5, 4}, 1.0, BoundaryCondition::Dirichlet);
    const auto s = eigenvalues(build_hamiltonian(box, MagneticField::zero(2), std::vector<double>(20, 0.0)));
    const auto expected = oracle::kron_sum(oracle::chain_dirichlet(5, 1.0), oracle::chain_dirichlet(4, 1.0));
    CHECK(oracle::max_abs_diff(s.eigenvalues, expected) < 1e-12);
  }

  TEST_CASE("plaquette phase equals exp(-i B h^2)") {
    const double h = 0.7, b = 0.9;
    const BoxSpec box({4, 5}, h, BoundaryCondition::Dirichlet);
    const auto op = build_hamiltonian(box, MagneticField::planar(2, b), std::vector<double>(20, 0.0));
    for (int x = 0; x + 1 < 4; ++x)
      for (int y = 0; y + 1 < 5; ++y) {
        const auto a = box.index({x, y, 0}), bb = box.index({x + 1, y, 0});
        const auto c = box.index({x + 1, y + 1, 0}), d = box.index({x, y + 1, 0});
        const cplx loop = op(a, bb) * op(bb, c) * op(c, d) * op(d, a);
        const double hop = 1.0 / (2 * h * h);
        const cplx expected = std::pow(hop, 4) * std::polar(1.0, -b * h * h);
        CHECK(std::abs(loop - expected) < 1e-12 * std::abs(expected));
      }
  }

  TEST_CASE("builder output is exactly Hermitian with real diagonal") {
    std::mt19937_64 rng(3);
    RealMatrix t(3, 3);
    t(0, 1) = 0.4; t(1, 0) = -0.4;
    t(0, 2) = -1.1; t(2, 0) = 1.1;
    t(1, 2) = 0.3; t(2, 1) = -0.3;
    for (auto bc : {BoundaryCondition::Dirichlet, BoundaryCondition::Neumann}) {
      const BoxSpec box({3, 4, 3}, 0.8, bc);
      const auto op = build_hamiltonian(box, MagneticField(t), random_values(36, rng));
      CHECK(hermiticity_defect(op.matrix()) == 0.0);
      for (std::size_t i = 0; i < op.dim(); ++i) CHECK(op(i, i).imag() == 0.0);
    }
  }

  TEST_CASE("Neumann diagonal uses the coordination number") {
    const BoxSpec box({3, 3}, 1.0, BoundaryCondition::Neumann);
    const auto op = build_hamiltonian(box, MagneticField::zero(2), std::vector<double>(9, 0.0));
    CHECK(op(box.index({0, 0, 0}), box.index({0, 0, 0})).real() == doctest::Approx(1.0));
    CHECK(op(box.index({1, 0, 0}), box.index({1, 0, 0})).real() == doctest::Approx(1.5));
    CHECK(op(box.index({1, 1, 0}), box.index({1, 1, 0})).real() == doctest::Approx(2.0));
  }

  TEST_CASE("periodic box with incommensurate flux is rejected, naming the quantum") {
    const BoxSpec box({4, 4}, 1.0, BoundaryCondition::Periodic);
    try {
      build_hamiltonian(box, MagneticField::planar(2, 0.5), std::vector<double>(16, 0.0));
      FAIL("expected InvalidArgument");
    } catch (const InvalidArgument& e) {
      CHECK(std::string(e.what()).find("multiple of") != std::string::npos);
    }
    const double quantum = 2 * std::numbers::pi / 16;
    CHECK_NOTHROW(build_hamiltonian(box, MagneticField::planar(2, 3 * quantum), std::vector<double>(16, 0.0)));
  }

  TEST_CASE("gauge transform leaves the spectrum unchanged") {
    std::mt19937_64 rng(11);
    const BoxSpec box({5, 5}, 1.0, BoundaryCondition::Dirichlet);
    const auto op = build_hamiltonian(box, MagneticField::planar(2, 0.7), random_values(25, rng, 2.0));
    const auto chi = random_values(25, rng, 10.0);
    const auto g = gauge_transform(op, chi);
    CHECK(max_abs_difference(g.matrix(), op.matrix()) > 1e-3);
    CHECK(oracle::max_abs_diff(eigenvalues(g).eigenvalues, eigenvalues(op).eigenvalues) < 1e-12 * op.norm());
  }

  TEST_CASE("magnetic translation conjugates H(V) into H(V(. + s))") {
    std::mt19937_64 rng(5);
    const int l = 6;
    const double b = 2 * std::numbers::pi / l;  // B h^2 L = 2 pi per side
    const BoxSpec box({l, l}, 1.0, BoundaryCondition::Periodic);
    const auto field = MagneticField::planar(2, b);
    const auto v = random_values(box.site_count(), rng);
    const auto op = build_hamiltonian(box, field, v);
    for (auto s : {std::array<int, 2>{1, 0}, std::array<int, 2>{0, 2}, std::array<int, 2>{3, 5}}) {
      std::vector<double> shifted(box.site_count());
      for (std::size_t i = 0; i < box.site_count(); ++i) {
        auto c = box.coords(i);
        c[0] = (c[0] + s[0]) % l;
        c[1] = (c[1] + s[1]) % l;
        shifted[i] = v[box.index(c)];
      }
      const auto t = magnetic_translate(op, field, s);
      CHECK(max_abs_difference(t.matrix(), build_hamiltonian(box, field, shifted).matrix()) < 1e-12);
      CHECK(oracle::max_abs_diff(eigenvalues(t).eigenvalues, eigenvalues(op).eigenvalues) < 1e-12 * op.norm());
    }
  }

  TEST_CASE("magnetic translation needs per-side commensurability") {
    const BoxSpec box({4, 6}, 1.0, BoundaryCondition::Periodic);
    const auto field = MagneticField::planar(2, 2 * std::numbers::pi / 24);  // total flux 1, not per side
    const auto op = build_hamiltonian(box, field, std::vector<double>(24, 0.0));
    CHECK_THROWS_AS(magnetic_translate(op, field, std::vector<int>{1, 0}), InvalidArgument);
    const BoxSpec dbox({4, 4}, 1.0, BoundaryCondition::Dirichlet);
    const auto dop = build_hamiltonian(dbox, MagneticField::zero(2), std::vector<double>(16, 0.0));
    CHECK_THROWS_AS(magnetic_translate(dop, MagneticField::zero(2), std::vector<int>{1, 0}), InvalidArgument);
  }

  TEST_CASE("diamagnetic domination of the heat kernel") {
    std::mt19937_64 rng(8);
    const BoxSpec box({5, 4}, 1.0, BoundaryCondition::Neumann);
    const auto free = build_hamiltonian(box, MagneticField::zero(2), std::vector<double>(20, 0.0));
    const auto mag = build_hamiltonian(box, MagneticField::planar(2, 1.3), std::vector<double>(20, 0.0));
    for (double t : {0.1, 1.0}) {
      const auto k0 = heat_kernel(free, t), kb = heat_kernel(mag, t);
      for (std::size_t i = 0; i < 20; ++i)
        for (std::size_t j = 0; j < 20; ++j) CHECK(std::abs(kb(i, j)) <= k0(i, j).real() + 1e-12);
    }
  }

  TEST_CASE("input validation") {
    const BoxSpec box({3}, 1.0, BoundaryCondition::Dirichlet);
    CHECK_THROWS_AS(build_hamiltonian(box, MagneticField::zero(1), std::vector<double>{0.0, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(build_hamiltonian(box, MagneticField::zero(1), std::vector<double>{0.0, NAN, 0.0}),
                    InvalidArgument);
    CHECK_THROWS_AS(build_hamiltonian(box, MagneticField::zero(2), std::vector<double>(3, 0.0)), InvalidArgument);
    ComplexMatrix m(2, 2);
    m(0, 1) = cplx(1, 1);
    m(1, 0) = cplx(1, 1);
    CHECK_THROWS_AS(HermitianOperator::from_matrix(m), InvalidArgument);
    CHECK_THROWS_AS(BoxSpec({0, 3}, 1.0, BoundaryCondition::Dirichlet), InvalidArgument);
    CHECK_THROWS_AS(BoxSpec({3, 3}, -1.0, BoundaryCondition::Dirichlet), InvalidArgument);
    CHECK_THROWS_AS(BoxSpec({2, 3}, 1.0, BoundaryCondition::Periodic), InvalidArgument);
    RealMatrix notskew(2, 2);
    notskew(0, 1) = 1.0;
    CHECK_THROWS_AS(MagneticField{notskew}, InvalidArgument);
  }

  TEST_CASE("boundary condition names") {
    CHECK(parse_boundary_condition("dirichlet") == BoundaryCondition::Dirichlet);
    CHECK(parse_boundary_condition("N") == BoundaryCondition::Neumann);
    CHECK(parse_boundary_condition("periodic") == BoundaryCondition::Periodic);
    CHECK_FALSE(parse_boundary_condition("robin").has_value());
    CHECK(to_string(BoundaryCondition::Neumann) == "neumann");
  }

  TEST_CASE("site indexing round trip") {
    const BoxSpec box({3, 4, 5}, 0.5, BoundaryCondition::Dirichlet);
    for (std::size_t i = 0; i < box.site_count(); ++i) CHECK(box.index(box.coords(i)) == i);
    CHECK(box.coords(1)[0] == 1);
    CHECK(box.position(box.index({2, 1, 3}))[2] == doctest::Approx(1.5));
    CHECK(box.volume() == doctest::Approx(60 * 0.125));
  }
}
