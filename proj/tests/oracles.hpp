#pragma once

// Test-only reference computations, kept independent of the library code
// they check.  Everything here works on integer-scaled rationals or plain
// loops so that expected values are exact.

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

namespace oracles {

// Energy of a quadratic binary form with integer-scaled coefficients.
// coeffs layout matches the chromosome: (c0, c_1.., d_{1,2}, d_{1,3}, ...).
// Returns scale * energy as an exact integer.
inline std::int64_t scaled_quadratic_energy(const std::vector<std::int64_t>& coeffs,
                                            int ntot, std::uint32_t config) {
  auto bit = [&](int i) -> std::int64_t {  // 1-based, qubit 1 = MSB
    return (config >> (ntot - i)) & 1u;
  };
  std::int64_t e = coeffs[0];
  std::size_t g = 1;
  for (int i = 1; i <= ntot; ++i) e += coeffs[g++] * bit(i);
  for (int i = 1; i <= ntot; ++i)
    for (int j = i + 1; j <= ntot; ++j) e += coeffs[g++] * bit(i) * bit(j);
  return e;
}

// All 2^ntot scaled energies, sorted ascending.
inline std::vector<std::int64_t> scaled_spectrum(
    const std::vector<std::int64_t>& coeffs, int ntot) {
  std::vector<std::int64_t> energies;
  energies.reserve(std::size_t(1) << ntot);
  for (std::uint32_t k = 0; k < (1u << ntot); ++k)
    energies.push_back(scaled_quadratic_energy(coeffs, ntot, k));
  std::sort(energies.begin(), energies.end());
  return energies;
}

// p=3 ferromagnet energies scaled so they are integers:
// E = -(n - 2s)^3 / n^2 with s the number of set bits, so n^2 * E is exact.
inline std::vector<std::int64_t> scaled_pspin3_spectrum(int n) {
  std::vector<std::int64_t> energies;
  for (std::uint32_t k = 0; k < (1u << n); ++k) {
    const int s = __builtin_popcount(k);
    const std::int64_t t = n - 2 * s;
    energies.push_back(-t * t * t);
  }
  std::sort(energies.begin(), energies.end());
  return energies;
}

// Integer-scaled analytic embedding chromosomes (delta premultiplied by the
// same scale).  Scale 9 makes every n=3 gene integral, scale 2 every n=4
// gene, provided scale*delta is integral.
inline std::vector<std::int64_t> scaled_analytic3(std::int64_t delta9) {
  // scale 9; delta9 = 9*delta
  return {-27,           3 * delta9,     26, 26, 26,
          -2 * delta9,   -2 * delta9,    48, -24 + delta9, -24, -24};
}

inline std::vector<std::int64_t> scaled_analytic4(std::int64_t delta2) {
  // scale 2; delta2 = 2*delta
  return {-8,
          3 * delta2, 3 * delta2,
          7, 7, 7, 7,
          0, -2 * delta2, -2 * delta2, 6, 6,
          6, 6, -2 * delta2, -2 * delta2,
          -6 + delta2, -6, -6,
          -6, -6,
          -6 + delta2};
}

// Brute-force energies of the cubic term J*x_i*x_j*x_k over 3 qubits,
// sorted ascending (8 values).
inline std::vector<double> cubic_term_levels(double coupling) {
  std::vector<double> levels;
  for (std::uint32_t k = 0; k < 8; ++k)
    levels.push_back(__builtin_popcount(k) == 3 ? coupling : 0.0);
  std::sort(levels.begin(), levels.end());
  return levels;
}

}  // namespace oracles
