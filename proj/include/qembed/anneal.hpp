#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "qembed/errors.hpp"
#include "qembed/model.hpp"

namespace qembed {

using HamiltonianMatrix = Eigen::MatrixXd;
using StateVector = Eigen::VectorXcd;

/// Dense 2^n x 2^n matrices stop being fun beyond this.
inline constexpr int kMaxDenseQubits = 12;

inline void check_dense_cap(int size, const char* what) {
  if (size < 1 || size > kMaxDenseQubits)
    throw ResourceError(std::string(what) + ": size outside [1, 12]");
}

/// Diagonal matrix of the classical p-spin energies; basis state |x> is the
/// integer whose binary digits are (x_1 .. x_n), qubit 1 most significant.
inline HamiltonianMatrix build_pspin_hamiltonian(const PSpinModel& model) {
  check_dense_cap(model.n, "build_pspin_hamiltonian");
  const auto dim = std::int64_t(1) << model.n;
  HamiltonianMatrix H = HamiltonianMatrix::Zero(dim, dim);
  for (std::int64_t k = 0; k < dim; ++k)
    H(k, k) = pspin_energy(BitConfig::from_index(static_cast<std::uint64_t>(k),
                                                 model.n),
                           model);
  return H;
}

/// Diagonal matrix of K + sum h_i sigma_i^z + sum J_{i,j} sigma_i^z sigma_j^z.
inline HamiltonianMatrix build_quadratic_hamiltonian(const IsingModel& model) {
  check_dense_cap(model.ntot(), "build_quadratic_hamiltonian");
  const auto dim = std::int64_t(1) << model.ntot();
  HamiltonianMatrix H = HamiltonianMatrix::Zero(dim, dim);
  for (std::int64_t k = 0; k < dim; ++k)
    H(k, k) = ising_energy(BitConfig::from_index(static_cast<std::uint64_t>(k),
                                                 model.ntot()),
                           model);
  return H;
}

/// H_0 = -sum_i sigma_i^x.  Ground state is the uniform superposition with
/// energy -size.
inline HamiltonianMatrix build_transverse_field(int size) {
  check_dense_cap(size, "build_transverse_field");
  const auto dim = std::int64_t(1) << size;
  HamiltonianMatrix H = HamiltonianMatrix::Zero(dim, dim);
  for (std::int64_t k = 0; k < dim; ++k)
    for (int i = 0; i < size; ++i)
      H(k, k ^ (std::int64_t(1) << (size - 1 - i))) = -1.0;
  return H;
}

inline std::vector<double> uniform_grid(int points) {
  if (points < 2) throw std::invalid_argument("uniform_grid: need >= 2 points");
  std::vector<double> s(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    s[static_cast<std::size_t>(i)] = static_cast<double>(i) / (points - 1);
  return s;
}

/// Lowest k eigenvalues of (1-s)H0 + sH1 for each s in the grid, ascending.
inline std::vector<std::vector<double>> instantaneous_spectrum(
    const HamiltonianMatrix& H0, const HamiltonianMatrix& H1,
    const std::vector<double>& s_grid, int k) {
  if (H0.rows() != H1.rows() || H0.cols() != H1.cols())
    throw DimensionError("instantaneous_spectrum: dimension mismatch");
  if (k < 1 || k > H0.rows())
    throw std::invalid_argument("instantaneous_spectrum: bad level count");
  std::vector<std::vector<double>> traces;
  traces.reserve(s_grid.size());
  for (double s : s_grid) {
    const HamiltonianMatrix H = (1.0 - s) * H0 + s * H1;
    Eigen::SelfAdjointEigenSolver<HamiltonianMatrix> eig(H,
                                                         Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success)
      throw NumericError("instantaneous_spectrum: eigensolver failed");
    std::vector<double> levels(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) levels[static_cast<std::size_t>(i)] = eig.eigenvalues()(i);
    traces.push_back(std::move(levels));
  }
  return traces;
}

/// Controls one closed-system anneal of H(s) = A(s) H0 + B(s) H1,
/// s = t/tf in [0, 1].  The schedule defaults to the linear pair
/// A = 1-s, B = s.
struct AnnealConfig {
  double tf = 100.0;
  std::vector<double> s_grid;  // empty selects uniform_grid(201)
  double rtol = 1e-8;
  double atol = 1e-8;
  int levels = 11;             // instantaneous eigenvalues recorded per point
  double degeneracy_tol = 1e-9;
  std::function<double(double)> A;
  std::function<double(double)> B;

  std::vector<double> grid() const {
    return s_grid.empty() ? uniform_grid(201) : s_grid;
  }
  double schedule_a(double s) const { return A ? A(s) : 1.0 - s; }
  double schedule_b(double s) const { return B ? B(s) : s; }
};

struct AnnealResult {
  std::vector<double> s_grid;
  std::vector<double> pgs_trace;  // ground-subspace occupation P(s)
  double fidelity = 0.0;          // P at the final grid point
  std::vector<std::vector<double>> spectra_traces;  // [point][level]
  double min_gap = 0.0;           // min over grid of E_1(s) - E_0(s)
  double norm_drift = 0.0;        // max per-step |norm - 1| before projection
};

namespace detail {

/// Dormand-Prince 5(4) step on the Schrodinger flow dpsi/ds = -i tf H(s) psi.
/// The flow is norm-preserving, so each accepted step is projected back onto
/// the unit sphere; the pre-projection deviation is what the embedded error
/// estimate already controls, and its maximum is reported as norm_drift.
class DormandPrince {
 public:
  template <class Rhs>
  static void integrate(Rhs&& rhs, StateVector& psi, double s_begin,
                        double s_end, double rtol, double atol,
                        double& max_drift) {
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                     a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                     a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                     e3 = 500.0 / 1113 - 7571.0 / 16695,
                     e4 = 125.0 / 192 - 393.0 / 640,
                     e5 = -2187.0 / 6784 + 92097.0 / 339200,
                     e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    const double span = s_end - s_begin;
    if (span <= 0) return;
    double s = s_begin;
    double h = std::min(span, 1e-4);
    const double h_min = std::max(span, 1.0) * 1e-15;

    StateVector k1, k2, k3, k4, k5, k6, k7, y, y5;
    while (s < s_end) {
      h = std::min(h, s_end - s);
      rhs(s, psi, k1);
      y = psi + h * (a21 * k1);
      rhs(s + c2 * h, y, k2);
      y = psi + h * (a31 * k1 + a32 * k2);
      rhs(s + c3 * h, y, k3);
      y = psi + h * (a41 * k1 + a42 * k2 + a43 * k3);
      rhs(s + c4 * h, y, k4);
      y = psi + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      rhs(s + c5 * h, y, k5);
      y = psi + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      rhs(s + h, y, k6);
      y5 = psi + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      rhs(s + h, y5, k7);

      // scaled RMS of the embedded 5th/4th order difference
      double err_sq = 0.0;
      for (Eigen::Index i = 0; i < psi.size(); ++i) {
        const std::complex<double> e = h * (e1 * k1(i) + e3 * k3(i) + e4 * k4(i) +
                                            e5 * k5(i) + e6 * k6(i) + e7 * k7(i));
        const double scale =
            atol + rtol * std::max(std::abs(psi(i)), std::abs(y5(i)));
        const double ratio = std::abs(e) / scale;
        err_sq += ratio * ratio;
      }
      const double err = std::sqrt(err_sq / static_cast<double>(psi.size()));

      if (err <= 1.0) {
        s += h;
        const double norm = y5.norm();
        max_drift = std::max(max_drift, std::abs(norm - 1.0));
        psi = y5 / norm;
      }
      const double factor =
          err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      h *= std::clamp(factor, 0.2, 5.0);
      if (h < h_min)
        throw NumericError("evolve: step size underflow");
    }
  }
};

}  // namespace detail

/// Integrates i dpsi/dt = H(t/tf) psi from the ground state of H(s_0) and
/// records the instantaneous ground-subspace occupation P(s), the lowest
/// eigenvalue traces and the minimal gap at every grid point.
/// Fidelity is P at the last grid point.
inline AnnealResult evolve(const HamiltonianMatrix& H0,
                           const HamiltonianMatrix& H1,
                           const AnnealConfig& cfg) {
  if (H0.rows() != H1.rows() || H0.cols() != H1.cols())
    throw DimensionError("evolve: dimension mismatch");
  if (cfg.tf <= 0) throw std::invalid_argument("evolve: tf must be > 0");
  const auto dim = H0.rows();

  AnnealResult result;
  result.s_grid = cfg.grid();
  const int levels = std::min<int>(cfg.levels, static_cast<int>(dim));
  result.min_gap = std::numeric_limits<double>::infinity();

  auto hamiltonian_at = [&](double s) -> HamiltonianMatrix {
    return cfg.schedule_a(s) * H0 + cfg.schedule_b(s) * H1;
  };

  // eigendecomposition bookkeeping at one grid point
  auto analyze = [&](double s, const StateVector& psi) {
    Eigen::SelfAdjointEigenSolver<HamiltonianMatrix> eig(hamiltonian_at(s));
    if (eig.info() != Eigen::Success)
      throw NumericError("evolve: eigensolver failed");
    const auto& w = eig.eigenvalues();
    const auto& V = eig.eigenvectors();
    if (dim > 1) result.min_gap = std::min(result.min_gap, w(1) - w(0));
    std::vector<double> trace(static_cast<std::size_t>(levels));
    for (int i = 0; i < levels; ++i) trace[static_cast<std::size_t>(i)] = w(i);
    result.spectra_traces.push_back(std::move(trace));
    double p = 0.0;
    for (Eigen::Index i = 0; i < dim && w(i) <= w(0) + cfg.degeneracy_tol; ++i)
      p += std::norm(V.col(i).cast<std::complex<double>>().dot(psi));
    result.pgs_trace.push_back(p);
  };

  // initial state: ground state of H(s_0)
  const double s0 = result.s_grid.front();
  Eigen::SelfAdjointEigenSolver<HamiltonianMatrix> init(hamiltonian_at(s0));
  if (init.info() != Eigen::Success)
    throw NumericError("evolve: eigensolver failed at s0");
  StateVector psi = init.eigenvectors().col(0).cast<std::complex<double>>();

  const std::complex<double> minus_i(0.0, -1.0);
  auto rhs = [&](double s, const StateVector& y, StateVector& dy) {
    dy = minus_i * cfg.tf *
         (cfg.schedule_a(s) * (H0 * y) + cfg.schedule_b(s) * (H1 * y));
  };

  analyze(s0, psi);
  for (std::size_t g = 1; g < result.s_grid.size(); ++g) {
    detail::DormandPrince::integrate(rhs, psi, result.s_grid[g - 1],
                                     result.s_grid[g], cfg.rtol, cfg.atol,
                                     result.norm_drift);
    analyze(result.s_grid[g], psi);
  }
  result.fidelity = result.pgs_trace.back();

  if (result.norm_drift > 10.0 * (cfg.rtol + cfg.atol))
    throw NumericError("evolve: norm drift exceeded 10x integrator tolerance");
  return result;
}

/// Adiabatic-criterion proxy for the linear schedule:
///   max over the grid and all eigenpairs (a, b) of
///   |<eps_a(s)| H1 - H0 |eps_b(s)>| / Delta^2,
/// with Delta the minimal ground gap over the grid.  The Hellmann-Feynman
/// diagonal is included in the maximum.
struct AdiabaticBound {
  double value = 0.0;
  double min_gap = 0.0;
  bool gap_degenerate = false;  // min gap below 1e-12; value is unreliable
};

inline AdiabaticBound adiabatic_bound(const HamiltonianMatrix& H0,
                                      const HamiltonianMatrix& H1,
                                      const std::vector<double>& s_grid) {
  if (H0.rows() != H1.rows() || H0.cols() != H1.cols())
    throw DimensionError("adiabatic_bound: dimension mismatch");
  const HamiltonianMatrix dH = H1 - H0;
  double numerator = 0.0;
  double gap = std::numeric_limits<double>::infinity();
  for (double s : s_grid) {
    const HamiltonianMatrix H = (1.0 - s) * H0 + s * H1;
    Eigen::SelfAdjointEigenSolver<HamiltonianMatrix> eig(H);
    if (eig.info() != Eigen::Success)
      throw NumericError("adiabatic_bound: eigensolver failed");
    if (H.rows() > 1)
      gap = std::min(gap, eig.eigenvalues()(1) - eig.eigenvalues()(0));
    const HamiltonianMatrix M =
        eig.eigenvectors().transpose() * dH * eig.eigenvectors();
    numerator = std::max(numerator, M.cwiseAbs().maxCoeff());
  }
  AdiabaticBound bound;
  bound.min_gap = gap;
  bound.gap_degenerate = !(gap > 1e-12);
  bound.value = numerator / (gap * gap);
  return bound;
}

}  // namespace qembed
