#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <utility>

#include "fock/basis.hpp"
#include "fock/common.hpp"

namespace fock {

// Complex amplitudes over an enumerated Fock basis.  Values are immutable in
// spirit: every operation returns a new state.
struct FockStateVector {
  std::shared_ptr<const FockBasis> basis;
  Eigen::VectorXcd amplitudes;

  FockStateVector() = default;
  FockStateVector(std::shared_ptr<const FockBasis> b, Eigen::VectorXcd a)
      : basis(std::move(b)), amplitudes(std::move(a)) {
    if (static_cast<std::size_t>(amplitudes.size()) != basis->size())
      throw std::invalid_argument("FockStateVector: amplitude count != basis size");
  }

  static FockStateVector zero(std::shared_ptr<const FockBasis> b) {
    Eigen::VectorXcd a = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(b->size()));
    return FockStateVector(std::move(b), std::move(a));
  }

  // basis ket |occ>
  static FockStateVector basis_state(std::shared_ptr<const FockBasis> b,
                                     const std::vector<int>& occ) {
    auto s = zero(std::move(b));
    s.amplitudes[static_cast<Eigen::Index>(s.basis->index_of(occ))] = 1.0;
    return s;
  }

  double norm() const { return amplitudes.norm(); }

  FockStateVector normalized() const {
    const double n = norm();
    if (n == 0.0) throw std::domain_error("cannot normalize the zero vector");
    return FockStateVector(basis, amplitudes / n);
  }
};

inline void require_same_basis(const FockStateVector& a, const FockStateVector& b) {
  if (!a.basis || !b.basis || !a.basis->compatible(*b.basis))
    throw basis_mismatch_error("states live on different bases");
}

inline cxd inner_product(const FockStateVector& a, const FockStateVector& b) {
  require_same_basis(a, b);
  return a.amplitudes.dot(b.amplitudes);  // Eigen's dot conjugates the left factor
}

namespace detail {

// Jordan-Wigner sign for acting on `mode`: parity of the occupation of all
// lower-index modes.
inline int jw_sign(const std::vector<int>& occ, int mode) {
  int swaps = 0;
  for (int m = 0; m < mode; ++m) swaps += occ[m];
  return (swaps % 2 == 0) ? 1 : -1;
}

}  // namespace detail

// a^dagger_mode acting on every component.  Bosons pick up sqrt(n+1); fermions
// pick up the Jordan-Wigner sign and double occupation annihilates the
// component.  Components that would exceed a per-mode occupation limit
// (hard-core bases) are projected out.
inline FockStateVector apply_creation(const FockStateVector& state, int mode) {
  const FockBasis& b = *state.basis;
  if (mode < 0 || mode >= b.modes()) throw std::out_of_range("apply_creation: bad mode index");
  auto target = enumerate_basis(b.modes(), b.particles() + 1, b.statistics(), b.max_occupation());
  auto out = FockStateVector::zero(target);
  std::vector<int> occ;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const cxd amp = state.amplitudes[static_cast<Eigen::Index>(i)];
    if (amp == 0.0) continue;
    occ = b.occupations(i);
    const int n = occ[mode];
    if (b.statistics() == Statistics::Fermion && n == 1) continue;
    if (b.max_occupation() != FockBasis::kUnrestricted && n + 1 > b.max_occupation()) continue;
    double factor = std::sqrt(static_cast<double>(n + 1));
    if (b.statistics() == Statistics::Fermion) factor = detail::jw_sign(occ, mode);
    occ[mode] = n + 1;
    out.amplitudes[static_cast<Eigen::Index>(target->index_of(occ))] += amp * factor;
    occ[mode] = n;
  }
  return out;
}

// a_mode; annihilating an empty mode contributes nothing.  On the vacuum
// sector the zero vector is returned on the same basis.
inline FockStateVector apply_annihilation(const FockStateVector& state, int mode) {
  const FockBasis& b = *state.basis;
  if (mode < 0 || mode >= b.modes()) throw std::out_of_range("apply_annihilation: bad mode index");
  if (b.particles() == 0) return FockStateVector::zero(state.basis);
  auto target = enumerate_basis(b.modes(), b.particles() - 1, b.statistics(), b.max_occupation());
  auto out = FockStateVector::zero(target);
  std::vector<int> occ;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const cxd amp = state.amplitudes[static_cast<Eigen::Index>(i)];
    if (amp == 0.0) continue;
    occ = b.occupations(i);
    const int n = occ[mode];
    if (n == 0) continue;
    double factor = std::sqrt(static_cast<double>(n));
    if (b.statistics() == Statistics::Fermion) factor = detail::jw_sign(occ, mode);
    occ[mode] = n - 1;
    out.amplitudes[static_cast<Eigen::Index>(target->index_of(occ))] += amp * factor;
    occ[mode] = n;
  }
  return out;
}

// <n_mode>
inline double number_expectation(const FockStateVector& state, int mode) {
  const FockBasis& b = *state.basis;
  if (mode < 0 || mode >= b.modes()) throw std::out_of_range("number_expectation: bad mode");
  double acc = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i)
    acc += std::norm(state.amplitudes[static_cast<Eigen::Index>(i)]) * b.occupations(i)[mode];
  return acc;
}

// Hermitian operator matrix over a labelled basis.  Labels are occupation
// tuples; reduced density matrices use labels of the subsystem modes only.
struct DensityMatrix {
  Eigen::MatrixXcd matrix;
  std::vector<std::vector<int>> labels;
  Statistics statistics = Statistics::Boson;

  static DensityMatrix from_pure(const FockStateVector& state) {
    DensityMatrix rho;
    rho.matrix = state.amplitudes * state.amplitudes.adjoint();
    rho.labels.reserve(state.basis->size());
    for (std::size_t i = 0; i < state.basis->size(); ++i)
      rho.labels.push_back(state.basis->occupations(i));
    rho.statistics = state.basis->statistics();
    return rho;
  }

  double trace() const { return matrix.trace().real(); }
  double purity() const { return (matrix * matrix).trace().real(); }

  // Hermitian within tol, trace 1 within tol, eigenvalues >= -tol.
  void validate(double tol = kNormTol) const {
    if (matrix.rows() != matrix.cols())
      throw std::invalid_argument("DensityMatrix: matrix not square");
    if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > tol)
      throw std::invalid_argument("DensityMatrix: not Hermitian");
    if (std::abs(matrix.trace() - cxd(1.0, 0.0)) > tol)
      throw std::invalid_argument("DensityMatrix: trace differs from one");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol)
      throw std::invalid_argument("DensityMatrix: negative eigenvalue");
  }
};

}  // namespace fock
