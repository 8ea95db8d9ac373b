#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qtherm/fundamental.hpp"

using namespace qtherm;

TEST_SUITE("fundamental") {

TEST_CASE("ideal gas closed form and extensivity") {
  IdealGas gas;
  const double e = 3.0, n = 2.0, v = 5.0;
  const double expect = n * (std::log(v / n * std::pow(4.0 * std::numbers::pi * e / (3.0 * n), 1.5)) + 2.5);
  CHECK(gas.entropy(e, n, v) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(std::abs(gas.entropy(2 * e, 2 * n, 2 * v) - 2 * gas.entropy(e, n, v)) < 1e-10);
  CHECK(gas.energy(gas.entropy(e, n, v), n, v) == doctest::Approx(e).epsilon(1e-12));
  CHECK_THROWS_AS(gas.entropy(0.0, 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(gas.entropy(1.0, -1.0, 1.0), ValidationError);
}

TEST_CASE("ideal gas derivatives by finite difference") {
  IdealGas gas;
  for (double e : {0.3, 4.0, 70.0}) {
    const double n = 1.7, v = 2.3;
    const double he = 1e-5 * e, hv = 1e-5 * v;
    const double ds_de = (gas.entropy(e + he, n, v) - gas.entropy(e - he, n, v)) / (2 * he);
    const double ds_dv = (gas.entropy(e, n, v + hv) - gas.entropy(e, n, v - hv)) / (2 * hv);
    CHECK(std::abs(ds_de / gas.inverse_temperature(e, n) - 1.0) < 1e-6);
    CHECK(std::abs(gas.temperature(e, n) / (2 * e / (3 * n)) - 1.0) < 1e-12);
    CHECK(std::abs(gas.temperature(e, n) * ds_dv / gas.pressure(e, n, v) - 1.0) < 1e-6);
    CHECK(std::abs(gas.pressure(e, n, v) / (n * gas.temperature(e, n) / v) - 1.0) < 1e-12);
  }
}

TEST_CASE("both forms of the total potential agree") {
  IdealGas gas;
  for (double e : {0.5, 2.0, 30.0})
    for (double n : {0.2, 1.0, 3.0})
      for (double v : {0.5, 4.0}) {
        const double mu = gas.total_potential(e, n, v).value();
        CHECK(std::abs(gas.potential_from_energy(e, n, v) / mu - 1.0) < 1e-5);
      }
}

TEST_CASE("absent constituent") {
  IdealGas gas;
  auto none = gas.total_potential(1.0, 0.0, 1.0);
  CHECK(none.is_absent());
  CHECK(none.to_string() == "-inf");
  CHECK(gas.total_potential_at_temperature(1.0, 0.0, 1.0).is_absent());

  double prev = -std::numeric_limits<double>::infinity();
  for (double n = 1e-6; n < 10.0; n *= 1.5) {
    const double mu = gas.total_potential_at_temperature(1.0, n, 1.0).value();
    CHECK(mu > prev);
    prev = mu;
  }
  double n = 1.0;
  for (int i = 0; i < 100; ++i) n *= 0.5;
  CHECK(gas.total_potential_at_temperature(1.0, n, 1.0).value() < -50.0);
  CHECK(TotalPotential::finite(-2.5).to_string() == "-2.5");
}

TEST_CASE("spin fundamental relation") {
  CHECK(spin_fundamental(1, 1, 0.5).inverse_temperature == 0.0);
  CHECK(spin_fundamental(1, 1, 0.5).entropy == doctest::Approx(std::log(2.0)));
  CHECK(spin_fundamental(1, 1, 1.0 / (1.0 + std::numbers::e)).inverse_temperature == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(spin_fundamental(1, 2.0, 1.0 / (1.0 + std::numbers::e)).inverse_temperature == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(spin_fundamental(1, 1, 1e-6).inverse_temperature > 13.8);
  CHECK(spin_fundamental(1, 1, 1.0 - 1e-6).inverse_temperature < -13.8);
  CHECK(spin_fundamental(1, 1, 1e-300).entropy < 1e-296);
  CHECK_THROWS_AS(spin_fundamental(1, 1, 0.0), ValidationError);
  CHECK_THROWS_AS(spin_fundamental(1, 1, 1.0), ValidationError);
  CHECK_THROWS_AS(spin_fundamental(1, -1, 0.3), ValidationError);

  double prev = std::numeric_limits<double>::infinity();
  for (int i = 1; i < 1000; ++i) {
    const double f = i / 1000.0;
    auto p = spin_fundamental(10, 1, f);
    CHECK(p.inverse_temperature < prev);
    prev = p.inverse_temperature;
    CHECK(std::abs(p.entropy - spin_fundamental(10, 1, 1.0 - f).entropy) < 1e-12);
  }
  // concave in energy
  for (int i = 2; i < 999; ++i) {
    const double a = spin_fundamental(1, 1, (i - 1) / 1000.0).entropy, b = spin_fundamental(1, 1, i / 1000.0).entropy,
                 c = spin_fundamental(1, 1, (i + 1) / 1000.0).entropy;
    CHECK(a - 2 * b + c <= 1e-8);
  }
}

TEST_CASE("classical bodies: energy runs from smaller to larger 1/T") {
  IdealGas gas;
  const double ea = 9.0, eb = 2.0, n = 1.0, v = 1.0;  // A hotter
  REQUIRE(gas.inverse_temperature(ea, n) < gas.inverse_temperature(eb, n));
  const double q = 1e-4;
  const double ds = gas.entropy(ea - q, n, v) + gas.entropy(eb + q, n, v) - gas.entropy(ea, n, v) - gas.entropy(eb, n, v);
  CHECK(ds > 0.0);
}

TEST_CASE("box entropy approaches the classical particle") {
  auto lo = semiclassical_box_vs_ideal_gas(200.0, 1.0);
  auto hi = semiclassical_box_vs_ideal_gas(400.0, 1.0);
  CHECK(hi.relative_deviation < lo.relative_deviation);
  CHECK(hi.relative_deviation < 0.05);
  CHECK(hi.tail_bound < 1e-8);
  CHECK(hi.classical_entropy == doctest::Approx(std::log(std::pow(std::numbers::pi * 400.0 / 6.0, 1.5)) + 1.5));

  // V -> 8V moves the classical entropy by ln 8
  auto big = semiclassical_box_vs_ideal_gas(200.0, 8.0);
  CHECK(std::abs(big.classical_entropy - lo.classical_entropy - std::log(8.0)) < 1e-12);
  CHECK(big.relative_deviation < 0.05);
}

}  // TEST_SUITE
