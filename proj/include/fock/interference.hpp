#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <vector>

#include "fock/basis.hpp"
#include "fock/common.hpp"
#include "fock/matrix_functions.hpp"
#include "fock/state.hpp"

namespace fock {

// L x L unitary acting on mode creation operators.  Column convention:
// a^dagger_j -> sum_k U(k, j) b^dagger_k, so networks compose by left
// multiplication (first element rightmost).
class ModeUnitary {
 public:
  explicit ModeUnitary(Eigen::MatrixXcd u, double tol = kNormTol) : u_(std::move(u)) {
    if (u_.rows() != u_.cols()) throw unitarity_error("ModeUnitary: matrix not square");
    const Eigen::MatrixXcd gram = u_.adjoint() * u_;
    const double dev =
        (gram - Eigen::MatrixXcd::Identity(u_.rows(), u_.cols())).cwiseAbs().maxCoeff();
    if (dev > tol)
      throw unitarity_error("ModeUnitary: deviation from unitarity " + std::to_string(dev));
  }

  int modes() const { return static_cast<int>(u_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return u_; }
  cxd operator()(int row, int col) const { return u_(row, col); }

  ModeUnitary operator*(const ModeUnitary& rhs) const {
    return ModeUnitary(Eigen::MatrixXcd(u_ * rhs.u_));
  }

  static ModeUnitary identity(int modes) {
    return ModeUnitary(Eigen::MatrixXcd::Identity(modes, modes));
  }

  // Phase shifter exp(i*phi*n_mode).
  static ModeUnitary phase_shifter(int modes, int mode, double phi) {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(modes, modes);
    u(mode, mode) = std::polar(1.0, phi);
    return ModeUnitary(std::move(u));
  }

  // Discrete Fourier transform network, F(k, j) = exp(2*pi*i*k*j/L)/sqrt(L).
  static ModeUnitary fourier(int modes) {
    Eigen::MatrixXcd u(modes, modes);
    for (int k = 0; k < modes; ++k)
      for (int j = 0; j < modes; ++j)
        u(k, j) = std::polar(1.0 / std::sqrt(double(modes)), 2.0 * M_PI * k * j / modes);
    return ModeUnitary(std::move(u));
  }

 private:
  Eigen::MatrixXcd u_;
};

// Two-mode beamsplitter with reflectivity R and reflection phase factor
// i e^{+/- i varphi}:
//   a1^dagger -> sqrt(T) b2^dagger + i e^{+i varphi} sqrt(R) b1^dagger
//   a2^dagger -> sqrt(T) b1^dagger + i e^{-i varphi} sqrt(R) b2^dagger
// with T = 1 - R.  R = 0 is a pure mode swap.
inline ModeUnitary beamsplitter(double reflectivity, double varphi = 0.0) {
  if (!(reflectivity >= 0.0 && reflectivity <= 1.0))
    throw std::domain_error("beamsplitter: reflectivity outside [0, 1]");
  const double r = std::sqrt(reflectivity);
  const double t = std::sqrt(1.0 - reflectivity);
  Eigen::MatrixXcd u(2, 2);
  u(0, 0) = cxd(0.0, 1.0) * std::polar(r, varphi);
  u(1, 0) = t;
  u(0, 1) = t;
  u(1, 1) = cxd(0.0, 1.0) * std::polar(r, -varphi);
  return ModeUnitary(std::move(u));
}

// Two equal beamsplitters around a relative phase phi in the lower arm.
inline ModeUnitary mach_zehnder_network(double reflectivity, double phi) {
  const ModeUnitary bs = beamsplitter(reflectivity);
  return bs * ModeUnitary::phase_shifter(2, 1, phi) * bs;
}

struct MachZehnderProbs {
  double p_upper;  // particle exits in the first (upper) mode
  double p_lower;
};

// Closed forms for the single-particle Mach-Zehnder fringe; both
// beamsplitters share the same reflectivity.
inline MachZehnderProbs mach_zehnder_probs(double reflectivity, double phi) {
  if (!(reflectivity >= 0.0 && reflectivity <= 1.0))
    throw std::domain_error("mach_zehnder_probs: reflectivity outside [0, 1]");
  const double R = reflectivity;
  const double T = 1.0 - R;
  const double c = std::cos(phi / 2.0);
  return {R * R + T * T - 2.0 * R * T * std::cos(phi), 4.0 * R * T * c * c};
}

namespace detail {

// Submatrix with row k of `u` repeated rows[k] times and column j repeated
// cols[j] times; drives both the permanent and determinant amplitudes.
inline Eigen::MatrixXcd scattering_submatrix(const Eigen::MatrixXcd& u,
                                             const std::vector<int>& rows,
                                             const std::vector<int>& cols) {
  int n = 0;
  for (int r : rows) n += r;
  Eigen::MatrixXcd sub(n, n);
  int i = 0;
  for (int k = 0; k < static_cast<int>(rows.size()); ++k)
    for (int rep = 0; rep < rows[k]; ++rep, ++i) {
      int j = 0;
      for (int l = 0; l < static_cast<int>(cols.size()); ++l)
        for (int rep2 = 0; rep2 < cols[l]; ++rep2, ++j) sub(i, j) = u(k, l);
    }
  return sub;
}

inline double occupation_norm(const std::vector<int>& occ) {
  double p = 1.0;
  for (int n : occ) p *= factorial(n);
  return p;
}

inline cxd scattering_permanent(const Eigen::MatrixXcd& sub) {
  return sub.rows() <= 6 ? permanent_naive(sub) : permanent_ryser(sub);
}

}  // namespace detail

// <out| U_hat |in> for bosons (permanent) or fermions (determinant).
inline cxd transition_amplitude(const std::vector<int>& in, const std::vector<int>& out,
                                const ModeUnitary& u, Statistics statistics) {
  const Eigen::MatrixXcd sub = detail::scattering_submatrix(u.matrix(), out, in);
  switch (statistics) {
    case Statistics::Boson:
      return detail::scattering_permanent(sub) /
             std::sqrt(detail::occupation_norm(in) * detail::occupation_norm(out));
    case Statistics::Fermion:
      return determinant(sub);
    default:
      throw std::invalid_argument("transition_amplitude: amplitudes exist only for bosons/fermions");
  }
}

// Probability of occupation `out` given occupation `in` through network `u`.
// Distinguishable particles follow the permanent of the element-wise |U|^2
// matrix divided by the output multiplicities.
inline double transition_probability(const std::vector<int>& in, const std::vector<int>& out,
                                     const ModeUnitary& u, Statistics statistics) {
  if (in.size() != out.size())
    throw std::invalid_argument("transition_probability: mode count mismatch");
  if (static_cast<int>(in.size()) != u.modes())
    throw std::invalid_argument("transition_probability: occupation/network size mismatch");
  int nin = 0, nout = 0;
  for (int v : in) nin += v;
  for (int v : out) nout += v;
  if (nin != nout) throw std::invalid_argument("transition_probability: particle number mismatch");

  if (statistics == Statistics::Distinguishable) {
    const Eigen::MatrixXcd probs = u.matrix().cwiseAbs2();
    const Eigen::MatrixXcd sub = detail::scattering_submatrix(probs, out, in);
    return detail::scattering_permanent(sub).real() / detail::occupation_norm(out);
  }
  return std::norm(transition_amplitude(in, out, u, statistics));
}

// U lifted to the Fock sector of `basis`: column j holds the amplitudes of
// U_hat |basis_j>.
inline Eigen::MatrixXcd lift_to_fock(const ModeUnitary& u, const FockBasis& basis) {
  if (u.modes() != basis.modes())
    throw std::invalid_argument("lift_to_fock: mode count mismatch");
  if (basis.statistics() == Statistics::Distinguishable)
    throw std::invalid_argument("lift_to_fock: no Fock lift for labelled particles");
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd lifted(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const auto& in = basis.occupations(static_cast<std::size_t>(j));
    for (Eigen::Index i = 0; i < dim; ++i) {
      lifted(i, j) = transition_amplitude(
          in, basis.occupations(static_cast<std::size_t>(i)), u, basis.statistics());
    }
  }
  return lifted;
}

// Probability table over a full output sector.  Entry order follows the
// basis enumeration, so the table is deterministic.
struct OutputDistribution {
  std::shared_ptr<const FockBasis> basis;
  Eigen::VectorXd probabilities;

  double probability(const std::vector<int>& occ) const {
    return probabilities[static_cast<Eigen::Index>(basis->index_of(occ))];
  }
  double total() const { return probabilities.sum(); }
};

inline OutputDistribution output_distribution(const std::vector<int>& in, const ModeUnitary& u,
                                              Statistics statistics,
                                              std::size_t dimension_cap = kDefaultDimensionCap) {
  int n = 0;
  for (int v : in) n += v;
  // occupancy tables for labelled particles share the bosonic support
  const Statistics enumeration =
      statistics == Statistics::Fermion ? Statistics::Fermion : Statistics::Boson;
  auto basis = enumerate_basis(static_cast<int>(in.size()), n, enumeration,
                               FockBasis::kUnrestricted, dimension_cap);
  OutputDistribution dist;
  dist.basis = basis;
  dist.probabilities.resize(static_cast<Eigen::Index>(basis->size()));
  for (std::size_t i = 0; i < basis->size(); ++i)
    dist.probabilities[static_cast<Eigen::Index>(i)] =
        transition_probability(in, basis->occupations(i), u, statistics);
  return dist;
}

// (N, N) on a beamsplitter of reflectivity R; for bosons on a balanced
// splitter every odd output count is suppressed.
inline OutputDistribution two_mode_nn_distribution(int particles_per_mode, double reflectivity,
                                                   Statistics statistics) {
  if (particles_per_mode < 1)
    throw std::domain_error("two_mode_nn_distribution: need at least one particle per mode");
  if (statistics == Statistics::Fermion && particles_per_mode > 1)
    throw std::invalid_argument("two_mode_nn_distribution: fermionic input limited to (1,1)");
  const std::vector<int> in{particles_per_mode, particles_per_mode};
  return output_distribution(in, beamsplitter(reflectivity), statistics);
}

// n! / prod_j r_j!: factor by which a bosonic full-bunching event exceeds the
// distinguishable-particle probability.
inline double bunching_enhancement(const std::vector<int>& occupations) {
  int n = 0;
  double denom = 1.0;
  for (int r : occupations) {
    if (r < 0) throw std::invalid_argument("bunching_enhancement: negative occupation");
    n += r;
    denom *= factorial(r);
  }
  return factorial(n) / denom;
}

// Same factor, cross-checked against the all-in-one-mode output of `u`.
inline double bunching_enhancement_verified(const std::vector<int>& occupations,
                                            const ModeUnitary& u, int sink_mode,
                                            double tol = kNormTol) {
  const double factor = bunching_enhancement(occupations);
  int n = 0;
  for (int r : occupations) n += r;
  std::vector<int> out(occupations.size(), 0);
  out[sink_mode] = n;
  const double pb = transition_probability(occupations, out, u, Statistics::Boson);
  const double pd = transition_probability(occupations, out, u, Statistics::Distinguishable);
  if (std::abs(pb - pd * factor) > tol)
    throw std::logic_error("bunching_enhancement_verified: enhancement identity violated");
  return factor;
}

// Applies a two-mode unitary on modes (mode_a, mode_b) of a bosonic state
// without building the full lifted matrix: each fixed pair total s mixes
// through the (s+1)-dimensional two-mode sector block.
inline FockStateVector apply_two_mode_unitary(const FockStateVector& state, int mode_a,
                                              int mode_b, const ModeUnitary& u2) {
  const FockBasis& b = *state.basis;
  if (b.statistics() != Statistics::Boson)
    throw std::invalid_argument("apply_two_mode_unitary: bosonic states only");
  if (u2.modes() != 2) throw std::invalid_argument("apply_two_mode_unitary: need a 2x2 unitary");
  if (mode_a == mode_b || mode_a < 0 || mode_b < 0 || mode_a >= b.modes() || mode_b >= b.modes())
    throw std::out_of_range("apply_two_mode_unitary: bad mode pair");

  std::vector<Eigen::MatrixXcd> blocks(static_cast<std::size_t>(b.particles()) + 1);
  std::vector<std::shared_ptr<const FockBasis>> sector(blocks.size());
  auto out = FockStateVector::zero(state.basis);
  std::vector<int> occ;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const cxd amp = state.amplitudes[static_cast<Eigen::Index>(i)];
    if (amp == 0.0) continue;
    occ = b.occupations(i);
    const int p = occ[mode_a];
    const int q = occ[mode_b];
    const int s = p + q;
    if (!sector[s]) {
      sector[s] = enumerate_basis(2, s, Statistics::Boson);
      blocks[s] = lift_to_fock(u2, *sector[s]);
    }
    const auto col = static_cast<Eigen::Index>(sector[s]->index_of({p, q}));
    for (std::size_t row = 0; row < sector[s]->size(); ++row) {
      const auto& pq = sector[s]->occupations(row);
      occ[mode_a] = pq[0];
      occ[mode_b] = pq[1];
      out.amplitudes[static_cast<Eigen::Index>(b.index_of(occ))] +=
          blocks[s](static_cast<Eigen::Index>(row), col) * amp;
    }
    occ[mode_a] = p;
    occ[mode_b] = q;
  }
  return out;
}

}  // namespace fock
