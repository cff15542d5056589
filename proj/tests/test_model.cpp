#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "qembed/model.hpp"
#include "qembed/rng.hpp"
#include "qembed/spectrum.hpp"

using namespace qembed;

TEST_CASE("BitConfig round-trips between bits, index and spins") {
  const BitConfig c = BitConfig::from_index(0b0110, 4);
  CHECK(c.bits() == std::vector<std::uint8_t>{0, 1, 1, 0});
  CHECK(c.index() == 0b0110);
  CHECK(c.spin(0) == 1);
  CHECK(c.spin(1) == -1);
  CHECK(c.to_string() == "0110");
  CHECK(c.flipped().index() == 0b1001);
  CHECK_THROWS_AS(BitConfig({0, 2}), std::invalid_argument);
}

TEST_CASE("pspin_energy reproduces the reference table values") {
  const PSpinModel m3(3, 3);
  CHECK(pspin_energy(BitConfig({0, 0, 0}), m3) == -3.0);
  CHECK(pspin_energy(BitConfig({1, 1, 1}), m3) == 3.0);
  CHECK_THAT(pspin_energy(BitConfig({0, 0, 1}), m3),
             Catch::Matchers::WithinAbs(-1.0 / 9.0, 1e-15));
  const PSpinModel m4(4, 3);
  CHECK(pspin_energy(BitConfig({0, 0, 0, 1}), m4) == -0.5);
  CHECK_THROWS_AS(pspin_energy(BitConfig({0, 0}), m3), DimensionError);
  CHECK_THROWS_AS(PSpinModel(2, 3), std::invalid_argument);
}

TEST_CASE("pspin_energy is Z2-antisymmetric for odd p") {
  for (int n : {3, 4, 5, 7}) {
    for (int p : {1, 3, 5}) {
      if (p > n) continue;
      const PSpinModel model(n, p);
      for (std::uint32_t k = 0; k < (1u << n); ++k) {
        const BitConfig c = BitConfig::from_index(k, n);
        CHECK_THAT(pspin_energy(c.flipped(), model),
                   Catch::Matchers::WithinAbs(-pspin_energy(c, model), 1e-12));
      }
    }
  }
}

TEST_CASE("quadratic_energy matches the chromosome layout") {
  const double delta = 50.0;
  const auto model =
      QuadraticModel::from_chromosome(analytic_solution(3, delta), 4, 1);
  CHECK(quadratic_energy(BitConfig({0, 0, 0, 0}), model) == -3.0);
  CHECK_THAT(quadratic_energy(BitConfig({1, 1, 1, 1}), model),
             Catch::Matchers::WithinAbs(3.0, 1e-12));
  CHECK_THROWS_AS(quadratic_energy(BitConfig({0, 0}), model), DimensionError);

  // all-zeros always returns the constant
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Chromosome v(11);
    for (auto& g : v) g = rng.uniform(-5, 5);
    const auto random_model = QuadraticModel::from_chromosome(v, 4, 1);
    CHECK(quadratic_energy(BitConfig({0, 0, 0, 0}), random_model) == v[0]);
  }
}

TEST_CASE("coupling storage is row-major upper-triangular") {
  Chromosome v(chromosome_length(4), 0.0);
  // genes: c0, c1..c4, d12, d13, d14, d23, d24, d34
  v[5] = 12.0;   // d(1,2)
  v[8] = 23.0;   // d(2,3)
  v[10] = 34.0;  // d(3,4)
  const auto m = QuadraticModel::from_chromosome(v, 4, 0);
  CHECK(m.coupling(1, 2) == 12.0);
  CHECK(m.coupling(2, 3) == 23.0);
  CHECK(m.coupling(3, 4) == 34.0);
  CHECK(m.coupling(1, 4) == 0.0);
  CHECK(m.to_chromosome() == v);
}

TEST_CASE("quad_to_ising: single coupling expands exactly") {
  // 4*x1*x2 = (1-s1)(1-s2) = 1 - s1 - s2 + s1 s2
  std::vector<double> d = {4.0};
  const QuadraticModel q(2, 0, 0.0, {0.0, 0.0}, d, {});
  const IsingModel ising = quad_to_ising(q);
  CHECK(ising.constant() == 1.0);
  CHECK(ising.field(1) == -1.0);
  CHECK(ising.field(2) == -1.0);
  CHECK(ising.coupling(1, 2) == 1.0);
  for (std::uint32_t k = 0; k < 4; ++k) {
    const BitConfig c = BitConfig::from_index(k, 2);
    CHECK_THAT(ising_energy(c, ising),
               Catch::Matchers::WithinAbs(quadratic_energy(c, q), 1e-12));
  }
}

TEST_CASE("quad_to_ising: constant model stays constant") {
  const QuadraticModel q(3, 0, 5.0, {0, 0, 0}, {0, 0, 0}, {});
  const IsingModel ising = quad_to_ising(q);
  CHECK(ising.constant() == 5.0);
  for (int i = 1; i <= 3; ++i) CHECK(ising.field(i) == 0.0);
}

TEST_CASE("quad_to_ising round-trips on random models") {
  Rng rng(20260810);
  for (int trial = 0; trial < 200; ++trial) {
    const int ntot = 2 + static_cast<int>(rng.below(5));  // 2..6
    Chromosome v(static_cast<std::size_t>(chromosome_length(ntot)));
    for (auto& g : v) g = rng.uniform(-100.0, 100.0);
    const auto q = QuadraticModel::from_chromosome(v, ntot, 0);
    const IsingModel ising = quad_to_ising(q);
    for (std::uint32_t k = 0; k < (1u << ntot); ++k) {
      const BitConfig c = BitConfig::from_index(k, ntot);
      CHECK_THAT(ising_energy(c, ising),
                 Catch::Matchers::WithinAbs(quadratic_energy(c, q), 1e-10));
    }
  }
}

TEST_CASE("quad_to_ising of the analytic model reproduces the 8 low levels") {
  const double delta = 50.0;
  const auto q = QuadraticModel::from_chromosome(analytic_solution(3, delta), 4, 1);
  const IsingModel ising = quad_to_ising(q);
  std::vector<double> energies;
  for (std::uint32_t k = 0; k < 16; ++k)
    energies.push_back(ising_energy(BitConfig::from_index(k, 4), ising));
  std::sort(energies.begin(), energies.end());
  const auto expected = oracles::scaled_pspin3_spectrum(3);  // scale 9
  for (int i = 0; i < 8; ++i)
    CHECK_THAT(energies[static_cast<std::size_t>(i)],
               Catch::Matchers::WithinAbs(
                   static_cast<double>(expected[static_cast<std::size_t>(i)]) / 9.0,
                   1e-12));
}

TEST_CASE("penalty_energy vanishes exactly on AND triples") {
  const double delta = 50.0;
  CHECK(penalty_energy(0, 0, 0, delta) == 0.0);
  CHECK(penalty_energy(1, 1, 1, delta) == 0.0);
  CHECK(penalty_energy(0, 0, 1, delta) == 150.0);
  CHECK(penalty_energy(1, 1, 0, delta) == 50.0);
  int zero_count = 0;
  for (int xi = 0; xi <= 1; ++xi)
    for (int xj = 0; xj <= 1; ++xj)
      for (int xt = 0; xt <= 1; ++xt) {
        const double e = penalty_energy(xi, xj, xt, delta);
        if (xt == (xi & xj)) {
          CHECK(e == 0.0);
          ++zero_count;
        } else {
          CHECK(e >= delta);
        }
      }
  CHECK(zero_count == 4);
  CHECK_THROWS_AS(penalty_energy(0, 0, 0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(penalty_energy(2, 0, 0, 1.0), std::invalid_argument);
}

TEST_CASE("and_embed_cubic reproduces the cubic term's 8 levels") {
  const double delta = 50.0;
  for (double coupling : {-8.0, -1.0, 0.0, 1.0, 8.0}) {
    const auto fragment = and_embed_cubic(coupling, {1, 2, 3}, delta);
    REQUIRE(fragment.ntot() == 4);
    REQUIRE(fragment.nanc() == 1);
    std::vector<double> energies;
    for (std::uint32_t k = 0; k < 16; ++k)
      energies.push_back(
          quadratic_energy(BitConfig::from_index(k, 4), fragment));
    std::sort(energies.begin(), energies.end());
    const auto expected = oracles::cubic_term_levels(coupling);
    for (int i = 0; i < 8; ++i)
      CHECK_THAT(energies[static_cast<std::size_t>(i)],
                 Catch::Matchers::WithinAbs(expected[static_cast<std::size_t>(i)],
                                            1e-12));
    // everything above the physical band is a penalized assignment
    for (int i = 8; i < 16; ++i)
      CHECK(energies[static_cast<std::size_t>(i)] >= expected.front() + delta - 1e-12);
  }
  CHECK_THROWS_AS(and_embed_cubic(1.0, {1, 1, 3}, 50.0), std::invalid_argument);
  CHECK_THROWS_AS(and_embed_cubic(1.0, {1, 2, 3}, 0.0), std::invalid_argument);
}

TEST_CASE("analytic_solution pins the documented gene values") {
  const double delta = 50.0;
  const Chromosome v3 = analytic_solution(3, delta);
  REQUIRE(static_cast<int>(v3.size()) == 11);
  CHECK(v3[0] == -3.0);
  CHECK(v3[1] == 150.0);                      // 3*delta on the ancilla
  CHECK_THAT(v3[2], Catch::Matchers::WithinAbs(26.0 / 9.0, 1e-15));
  CHECK(v3[5] == -100.0);                     // -2*delta ancilla-parent coupling
  CHECK_THAT(v3[8], Catch::Matchers::WithinAbs(-8.0 / 3.0 + delta, 1e-12));

  const Chromosome v4 = analytic_solution(4, delta);
  REQUIRE(static_cast<int>(v4.size()) == 22);
  CHECK(v4[1] == 150.0);
  CHECK(v4[2] == 150.0);
  CHECK_THAT(v4[16], Catch::Matchers::WithinAbs(-3.0 + delta, 1e-12));

  CHECK_THROWS_AS(analytic_solution(5, 50.0), std::invalid_argument);
  CHECK_THROWS_AS(analytic_solution(3, 0.0), std::invalid_argument);
}

TEST_CASE("analytic embeddings match the p-spin spectrum exactly (integer oracle)") {
  const std::int64_t delta = 50;

  SECTION("n = 3, scale 9") {
    const auto scaled = oracles::scaled_analytic3(9 * delta);
    const auto spectrum = oracles::scaled_spectrum(scaled, 4);
    const auto target = oracles::scaled_pspin3_spectrum(3);
    // the integer oracle itself: lowest 8 of the embedding == p-spin levels
    for (int i = 0; i < 8; ++i)
      REQUIRE(spectrum[static_cast<std::size_t>(i)] ==
              target[static_cast<std::size_t>(i)]);
    // penalized levels sit at least delta above the ground level
    for (int i = 8; i < 16; ++i)
      REQUIRE(spectrum[static_cast<std::size_t>(i)] >= target[0] + 9 * delta);

    // the double-precision implementation agrees with the oracle
    const auto model =
        QuadraticModel::from_chromosome(analytic_solution(3, 50.0), 4, 1);
    std::vector<double> energies;
    for (std::uint32_t k = 0; k < 16; ++k)
      energies.push_back(quadratic_energy(BitConfig::from_index(k, 4), model));
    std::sort(energies.begin(), energies.end());
    for (int i = 0; i < 16; ++i)
      CHECK_THAT(energies[static_cast<std::size_t>(i)],
                 Catch::Matchers::WithinAbs(
                     static_cast<double>(spectrum[static_cast<std::size_t>(i)]) / 9.0,
                     1e-12));
  }

  SECTION("n = 4, scale 2") {
    const auto scaled = oracles::scaled_analytic4(2 * delta);
    const auto spectrum = oracles::scaled_spectrum(scaled, 6);
    // E = -4 * ((4-2s)/4)^3 = -(2-s)^3 / 2, so 2E = -(2-s)^3 exactly
    std::vector<std::int64_t> target;
    for (std::uint32_t k = 0; k < 16; ++k) {
      const std::int64_t t = 2 - __builtin_popcount(k);
      target.push_back(-t * t * t);
    }
    std::sort(target.begin(), target.end());
    for (int i = 0; i < 16; ++i)
      REQUIRE(spectrum[static_cast<std::size_t>(i)] ==
              target[static_cast<std::size_t>(i)]);
    for (int i = 16; i < 64; ++i)
      REQUIRE(spectrum[static_cast<std::size_t>(i)] >= target[0] + 2 * delta);
  }
}

TEST_CASE("default ancilla pairing follows the register convention") {
  const auto defs3 = default_ancilla_pairing(4, 1);
  REQUIRE(defs3.size() == 1);
  CHECK(defs3[0] == AncillaDef{1, 2, 3});
  const auto defs4 = default_ancilla_pairing(6, 2);
  REQUIRE(defs4.size() == 2);
  CHECK(defs4[0] == AncillaDef{1, 3, 4});
  CHECK(defs4[1] == AncillaDef{2, 5, 6});
  CHECK_THROWS_AS(default_ancilla_pairing(4, 2), std::invalid_argument);
}
