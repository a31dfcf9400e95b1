#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "generators.hpp"
#include "nslab/errors.hpp"
#include "nslab/field.hpp"
#include "oracles.hpp"

using namespace nslab;

namespace {

const double kTwoPi = 2.0 * std::numbers::pi;

double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_SUITE("field") {

TEST_CASE("grid validates and maps wavenumbers") {
  CHECK_THROWS_AS(Grid(7, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Grid(2, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Grid(8, 0.0), InvalidArgument);

  const Grid g(8, kTwoPi);
  CHECK(g.wavenumber(3) == 3);
  CHECK(g.wavenumber(4) == -4);
  CHECK(g.wavenumber(7) == -1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto k = g.wavevector(i);
    REQUIRE(g.index(k.x(), k.y(), k.z()) == i);
  }
  CHECK(g.retained({2, -2, 0}));
  CHECK_FALSE(g.retained({3, 0, 0}));
}

TEST_CASE("energy of zero and single-mode fields") {
  const Grid g(32, kTwoPi);
  CHECK(energy(SpectralField(g)) == 0.0);

  const SpectralField f = shear_mode(g, 0.5);
  const double expected = std::pow(kTwoPi, 3) * 0.5;
  CHECK(energy(f) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(energy(f) == doctest::Approx(124.025).epsilon(1e-5));
  CHECK(relative(energy(f), oracle::real_space_energy(f, 32)) <= 1e-12);
  CHECK(energy(3.0 * f) == doctest::Approx(9.0 * energy(f)).epsilon(1e-14));
}

TEST_CASE("enstrophy examples") {
  const Grid g(32, kTwoPi);
  CHECK(enstrophy(SpectralField(g)) == 0.0);
  const SpectralField f = shear_mode(g, 0.5);
  CHECK(enstrophy(f) == doctest::Approx(energy(f)).epsilon(1e-14));

  // Box of a different size: |k'| = 2π/L scales enstrophy by (2π/L)^2.
  const Grid h(16, 3.0);
  const SpectralField s = shear_mode(h, 0.5);
  CHECK(enstrophy(s) == doctest::Approx(energy(s) * std::pow(kTwoPi / 3.0, 2)).epsilon(1e-14));
}

TEST_CASE("vorticity of a shear mode") {
  const Grid g(16, kTwoPi);
  const double a = 0.7;
  const SpectralField w = vorticity(shear_mode(g, a));
  const ModeVector plus = w.mode(1, 0, 0);
  const ModeVector minus = w.mode(-1, 0, 0);
  CHECK(std::abs(plus(0)) == 0.0);
  CHECK(std::abs(plus(1)) == 0.0);
  CHECK(std::abs(plus(2) - Complex(0.0, a)) < 1e-15);
  CHECK(std::abs(minus(2) - Complex(0.0, -a)) < 1e-15);
  CHECK(energy(vorticity(SpectralField(g))) == 0.0);
}

TEST_CASE("leray projection examples") {
  const Grid g(8, kTwoPi);
  auto projected = [&](ModeVector v) {
    SpectralField f(g);
    f.set_mode({1, 0, 0}, v);
    return leray_project(f).mode(1, 0, 0);
  };
  CHECK(projected({1.0, 0.0, 0.0}).norm() == 0.0);
  CHECK((projected({0.0, 1.0, 0.0}) - ModeVector(0.0, 1.0, 0.0)).norm() == 0.0);
  CHECK((projected({1.0, 1.0, 0.0}) - ModeVector(0.0, 1.0, 0.0)).norm() == 0.0);
}

TEST_CASE("property: projection is idempotent, contracting and divergence-free") {
  gen::Source src(11);
  const Grid g(16, kTwoPi);
  for (int trial = 0; trial < 20; ++trial) {
    SpectralField raw(g);
    std::normal_distribution<double> normal;
    std::mt19937_64 eng(src.seed());
    for (int x = -4; x <= 4; ++x) {
      for (int y = -4; y <= 4; ++y) {
        for (int z = 0; z <= 4; ++z) {
          if (z == 0 && (y < 0 || (y == 0 && x <= 0))) continue;
          ModeVector v;
          for (int j = 0; j < 3; ++j) v(j) = {normal(eng), normal(eng)};
          raw.set_mode({x, y, z}, v);
        }
      }
    }
    const SpectralField once = leray_project(raw);
    const SpectralField twice = leray_project(once);
    CHECK((twice.coeffs() - once.coeffs()).norm() <= 1e-14 * once.coeffs().norm());
    CHECK(energy(once) <= energy(raw));
    CHECK(check_invariants(once).ok());
  }
}

TEST_CASE("property: Parseval against real-space quadrature") {
  gen::Source src(3);
  const Grid g(32, kTwoPi);
  for (int trial = 0; trial < 2; ++trial) {
    const SpectralField f = src.field(g, 3);
    CHECK(relative(energy(f), oracle::real_space_energy(f, 32)) <= 1e-10);
    // FFT-based transform agrees too.
    const PointMatrix u = to_physical(f);
    const double h = g.spacing();
    CHECK(relative(energy(f), u.squaredNorm() * h * h * h) <= 1e-10);
  }
}

TEST_CASE("property: curl identity and div curl = 0") {
  gen::Source src(5);
  for (int n : {8, 16}) {
    const Grid g(n, n == 8 ? kTwoPi : 1.5);
    for (int trial = 0; trial < 10; ++trial) {
      const SpectralField f = src.field(g, n / 3);
      const SpectralField w = vorticity(f);
      CHECK(relative(enstrophy(f), energy(w)) <= 1e-10);
      CHECK(check_invariants(w).divergence_defect <= 1e-12);
    }
  }
}

TEST_CASE("physical round trip") {
  gen::Source src(9);
  const Grid g(16, 2.0);
  const SpectralField f = src.field(g, 5);
  const SpectralField back = from_physical(g, to_physical(f));
  CHECK((back.coeffs() - f.coeffs()).norm() <= 1e-13 * f.coeffs().norm());
}

TEST_CASE("rough field construction") {
  const Grid g(24, kTwoPi);
  CHECK_THROWS_AS(rough_field({2.0, 1.0, 9, 0}, g), SpecExceedsGrid);
  CHECK(energy(rough_field({2.0, 0.0, 8, 0}, g)) == 0.0);

  const SpectralField f = rough_field({2.0, 1.5, 8, 42}, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto k = g.wavevector(i);
    const double mag = f.coeffs().row(static_cast<Eigen::Index>(i)).norm();
    const int k2 = k.squaredNorm();
    if (k2 == 0 || k2 > 64) {
      REQUIRE(mag == 0.0);
    } else {
      REQUIRE(mag == doctest::Approx(1.5 * std::pow(k2, -1.0)).epsilon(1e-13));
    }
  }
  CHECK(energy(f) == doctest::Approx(std::pow(kTwoPi, 3) * 2.25 * oracle::shell_sum(8, -4.0))
                         .epsilon(1e-12));

  // Same seed: deterministic.  Different seed: different directions.
  CHECK(f.coeffs() == rough_field({2.0, 1.5, 8, 42}, g).coeffs());
  CHECK(f.coeffs() != rough_field({2.0, 1.5, 8, 43}, g).coeffs());
}

TEST_CASE("rough field is a truncation across kmax and grids") {
  const SpectralField small = rough_field({2.0, 1.0, 4, 7}, Grid(12, kTwoPi));
  const SpectralField large = rough_field({2.0, 1.0, 8, 7}, Grid(32, kTwoPi));
  for (int x = -4; x <= 4; ++x) {
    for (int y = -4; y <= 4; ++y) {
      for (int z = -4; z <= 4; ++z) {
        if (x * x + y * y + z * z > 16) continue;
        REQUIRE((small.mode(x, y, z) - large.mode(x, y, z)).norm() == 0.0);
      }
    }
  }
}

TEST_CASE("rough field shell-sum scaling under doubling") {
  for (int kmax : {8, 16}) {
    const SpectralField a = rough_field({2.0, 1.0, kmax, 3}, Grid(3 * kmax, kTwoPi));
    const SpectralField b = rough_field({2.0, 1.0, 2 * kmax, 3}, Grid(6 * kmax, kTwoPi));
    const double ens_oracle = oracle::shell_sum(2 * kmax, -2.0) / oracle::shell_sum(kmax, -2.0);
    const double energy_oracle = oracle::shell_sum(2 * kmax, -4.0) / oracle::shell_sum(kmax, -4.0);
    CHECK(enstrophy(b) / enstrophy(a) == doctest::Approx(ens_oracle).epsilon(1e-12));
    CHECK(energy(b) / energy(a) == doctest::Approx(energy_oracle).epsilon(1e-12));
    CHECK(std::abs(enstrophy(b) / enstrophy(a) - 2.0) <= 0.4);
  }
  // gamma = 3: enstrophy converges (Cauchy) under doubling.
  const double e8 = enstrophy(rough_field({3.0, 1.0, 8, 3}, Grid(24, kTwoPi)));
  const double e16 = enstrophy(rough_field({3.0, 1.0, 16, 3}, Grid(48, kTwoPi)));
  CHECK(e16 / e8 == doctest::Approx(oracle::shell_sum(16, -4.0) / oracle::shell_sum(8, -4.0)).epsilon(1e-12));
}

TEST_CASE("property: rough field invariants over 100 seeds") {
  const Grid g(12, kTwoPi);
  gen::Source src(17);
  for (int trial = 0; trial < 100; ++trial) {
    const double gamma = src.uniform(1.5, 3.0);
    const SpectralField f = rough_field({gamma, src.uniform(0.1, 5.0), 4, src.seed()}, g);
    const auto report = check_invariants(f);
    REQUIRE(report.ok());
    REQUIRE(report.divergence_max <= 1e-12);
  }
}

TEST_CASE("taylor-green field") {
  const Grid g(16, kTwoPi);
  const SpectralField f = taylor_green(g, 2.0);
  CHECK(check_invariants(f).ok());
  // (A^2/4) L^3 for u = A(sin x cos y cos z, -cos x sin y cos z, 0).
  CHECK(energy(f) == doctest::Approx(std::pow(kTwoPi, 3)).epsilon(1e-13));
  CHECK(enstrophy(f) == doctest::Approx(3.0 * energy(f)).epsilon(1e-13));
}

TEST_CASE("snapshot round trip") {
  gen::Source src(23);
  const SpectralField f = src.field(Grid(8, 1.25), 2);
  std::stringstream buffer;
  write_snapshot(buffer, f);
  std::string header;
  std::getline(buffer, header);
  CHECK(header == "8 1.25");
  buffer.seekg(0);
  const SpectralField back = read_snapshot(buffer);
  CHECK(back.grid() == f.grid());
  CHECK(back.coeffs() == f.coeffs());

  std::istringstream bad("8 1.0\n9 0 0 1 0 0 0 0 0\n");
  CHECK_THROWS_AS(read_snapshot(bad), InvalidArgument);
}

}  // TEST_SUITE
