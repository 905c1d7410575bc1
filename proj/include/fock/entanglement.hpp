#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "fock/basis.hpp"
#include "fock/common.hpp"
#include "fock/hubbard.hpp"
#include "fock/interference.hpp"
#include "fock/state.hpp"

namespace fock {

// Symmetric two-particle amplitude matrix v_{q,j} over a single-particle
// basis; Frobenius-normalized on construction.
class TwoParticleAmplitude {
 public:
  explicit TwoParticleAmplitude(Eigen::MatrixXcd v, double symmetry_tol = 1e-12) : v_(std::move(v)) {
    if (v_.rows() != v_.cols())
      throw std::invalid_argument("TwoParticleAmplitude: matrix not square");
    const double scale = std::max(1.0, v_.cwiseAbs().maxCoeff());
    if ((v_ - v_.transpose()).cwiseAbs().maxCoeff() > symmetry_tol * scale)
      throw std::invalid_argument("TwoParticleAmplitude: matrix not symmetric");
    const double norm = v_.norm();
    if (norm == 0.0) throw std::invalid_argument("TwoParticleAmplitude: zero amplitude");
    v_ /= norm;
  }

  int dim() const { return static_cast<int>(v_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return v_; }

 private:
  Eigen::MatrixXcd v_;
};

// First-quantized amplitude matrix of a two-boson Fock state: v_qq = c(2_q),
// v_qj = c(1_q 1_j)/sqrt(2).  The Frobenius norm equals the state norm.
inline TwoParticleAmplitude two_particle_amplitude(const FockStateVector& state) {
  const FockBasis& b = *state.basis;
  if (b.statistics() != Statistics::Boson || b.particles() != 2)
    throw std::invalid_argument("two_particle_amplitude: need a two-boson state");
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(b.modes(), b.modes());
  for (std::size_t i = 0; i < b.size(); ++i) {
    const cxd amp = state.amplitudes[static_cast<Eigen::Index>(i)];
    if (amp == 0.0) continue;
    const auto& occ = b.occupations(i);
    int first = -1, second = -1;
    for (int m = 0; m < b.modes(); ++m) {
      if (occ[m] == 2) { first = second = m; break; }
      if (occ[m] == 1) (first < 0 ? first : second) = m;
    }
    if (first == second) {
      v(first, first) = amp;
    } else {
      v(first, second) = v(second, first) = amp / std::sqrt(2.0);
    }
  }
  return TwoParticleAmplitude(std::move(v));
}

// ---------------------------------------------------------------------------
// Takagi factorization of a complex symmetric matrix: v = W diag(sigma) W^T
// with W unitary and sigma >= 0 descending.

struct TakagiResult {
  Eigen::MatrixXcd w;
  Eigen::VectorXd sigma;
};

// Uses the real 2n x 2n representation M = [[X, Y], [Y, -X]] of v = X + iY:
// M [x; y] = s [x; y] is equivalent to v conj(u) = s u with u = x + iy, and
// eigenvectors of distinct non-negative s map to orthonormal u.  Null-space
// candidates come in (u, iu) pairs and are reduced by Gram-Schmidt.
inline TakagiResult takagi(const Eigen::MatrixXcd& v) {
  const int n = static_cast<int>(v.rows());
  Eigen::MatrixXd m(2 * n, 2 * n);
  const Eigen::MatrixXd x = v.real();
  const Eigen::MatrixXd y = v.imag();
  m.topLeftCorner(n, n) = x;
  m.topRightCorner(n, n) = y;
  m.bottomLeftCorner(n, n) = y;
  m.bottomRightCorner(n, n) = -x;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  const double zero_tol = 1e-12 * scale;

  TakagiResult result;
  result.w.resize(n, n);
  result.sigma.resize(n);
  int col = 0;
  // eigen returns ascending order; walk from the top for descending sigma
  for (int k = 2 * n - 1; k >= 0 && col < n; --k) {
    const double lambda = es.eigenvalues()[k];
    if (lambda <= zero_tol) break;
    const Eigen::VectorXd vec = es.eigenvectors().col(k);
    result.w.col(col) = vec.head(n) + cxd(0, 1) * vec.tail(n);
    result.sigma[col] = lambda;
    ++col;
  }
  // null space: Gram-Schmidt over the remaining candidates
  for (int k = 0; k < 2 * n && col < n; ++k) {
    if (std::abs(es.eigenvalues()[k]) > zero_tol) continue;
    const Eigen::VectorXd vec = es.eigenvectors().col(k);
    Eigen::VectorXcd u = vec.head(n) + cxd(0, 1) * vec.tail(n);
    for (int c = 0; c < col; ++c) u -= result.w.col(c).dot(u) * result.w.col(c);
    const double norm = u.norm();
    if (norm < 1e-8) continue;
    result.w.col(col) = u / norm;
    result.sigma[col] = 0.0;
    ++col;
  }
  if (col != n) throw std::logic_error("takagi: factorization incomplete");

  const double unitarity =
      (result.w.adjoint() * result.w - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  const double reconstruction =
      (result.w * result.sigma.asDiagonal() * result.w.transpose() - v).cwiseAbs().maxCoeff();
  if (unitarity > 1e-10 || reconstruction > 1e-10)
    throw std::logic_error("takagi: verification failed");
  return result;
}

// ---------------------------------------------------------------------------
// Schmidt spectrum and particle-entanglement classification

struct SchmidtSpectrum {
  Eigen::VectorXd coefficients;  // non-negative, descending, sum of squares 1
  Eigen::MatrixXcd basis;        // columns are the diagonalizing states
  int rank = 0;
};

inline SchmidtSpectrum schmidt_spectrum(const TwoParticleAmplitude& v, double tol = 1e-8) {
  auto [w, sigma] = takagi(v.matrix());
  SchmidtSpectrum s;
  s.coefficients = std::move(sigma);
  s.basis = std::move(w);
  s.rank = 0;
  for (Eigen::Index k = 0; k < s.coefficients.size(); ++k)
    if (s.coefficients[k] > tol) ++s.rank;
  return s;
}

enum class ParticleClassification { SameState, SymmetrizedProduct, Entangled };

// Rank one: both particles in the same state.  Rank two: symmetrized product
// of two (not necessarily orthogonal) states.  Higher rank: particle
// entanglement.
inline ParticleClassification particle_entangled(const TwoParticleAmplitude& v,
                                                 double tol = 1e-8) {
  const int rank = schmidt_spectrum(v, tol).rank;
  if (rank <= 1) return ParticleClassification::SameState;
  if (rank == 2) return ParticleClassification::SymmetrizedProduct;
  return ParticleClassification::Entangled;
}

// <psi| P x (I-P) + (I-P) x P |psi> for P = p p^dagger, reduced to
// 2 (|v conj(p)|^2 - |p^dagger v conj(p)|^2) by symmetry of v.
inline double csop_expectation(const TwoParticleAmplitude& v, const Eigen::VectorXcd& p) {
  const Eigen::VectorXcd vp = v.matrix() * p.conjugate();
  const cxd s = p.dot(vp);
  return 2.0 * (vp.squaredNorm() - std::norm(s));
}

struct CsopResult {
  enum class Kind { SameState, ProjectorFound, NoProjector };
  Kind kind = Kind::NoProjector;
  std::optional<Eigen::VectorXcd> projector_state;  // P = p p^dagger
  double expectation = 0.0;   // <E_P> of the returned projector
  double sweep_max = 0.0;     // best expectation seen by the numerical sweep
  bool constituents_orthogonal = false;
};

namespace detail {

// hill-climbing sweep over rank-1 projectors, deterministic seed
inline double csop_sweep(const TwoParticleAmplitude& v, int restarts, int iterations) {
  const int d = v.dim();
  std::mt19937 rng(0x5eed);
  std::normal_distribution<double> g;
  auto random_unit = [&] {
    Eigen::VectorXcd p(d);
    for (int i = 0; i < d; ++i) p[i] = cxd(g(rng), g(rng));
    p.normalize();
    return p;
  };
  double best = 0.0;
  for (int r = 0; r < restarts; ++r) {
    Eigen::VectorXcd p = random_unit();
    double f = csop_expectation(v, p);
    double step = 0.5;
    for (int it = 0; it < iterations; ++it) {
      Eigen::VectorXcd q = p;
      for (int i = 0; i < d; ++i) q[i] += step * cxd(g(rng), g(rng));
      q.normalize();
      const double fq = csop_expectation(v, q);
      if (fq > f) {
        p = q;
        f = fq;
      } else {
        step *= 0.8;
        if (step < 1e-6) break;
      }
    }
    best = std::max(best, f);
  }
  return best;
}

}  // namespace detail

// Searches for the projector P with <E_P> = 1.  For equal-coefficient rank-2
// spectra it exists and is built from the Schmidt basis as
// p = (u1 + i u2)/sqrt(2); otherwise absence is certified by the rank
// criterion together with a numerical sweep over rank-1 projectors.
inline CsopResult csop_check(const TwoParticleAmplitude& v, double tol = 1e-8) {
  const SchmidtSpectrum spectrum = schmidt_spectrum(v, tol);
  CsopResult result;
  if (spectrum.rank <= 1) {
    result.kind = CsopResult::Kind::SameState;
    result.expectation = 0.0;
    return result;
  }
  if (spectrum.rank == 2) {
    result.constituents_orthogonal =
        std::abs(spectrum.coefficients[0] - spectrum.coefficients[1]) <= tol;
    if (result.constituents_orthogonal) {
      Eigen::VectorXcd p =
          (spectrum.basis.col(0) + cxd(0, 1) * spectrum.basis.col(1)) / std::sqrt(2.0);
      const double f = csop_expectation(v, p);
      if (f >= 1.0 - 1e-10) {
        result.kind = CsopResult::Kind::ProjectorFound;
        result.projector_state = std::move(p);
        result.expectation = f;
        return result;
      }
    }
  }
  result.kind = CsopResult::Kind::NoProjector;
  result.sweep_max = detail::csop_sweep(v, 120, 300);
  return result;
}

// ---------------------------------------------------------------------------
// mode bipartitions, reduced states and entropies

struct BipartiteCut {
  std::vector<int> left;

  static BipartiteCut first_modes(int count) {
    BipartiteCut cut;
    for (int i = 0; i < count; ++i) cut.left.push_back(i);
    return cut;
  }

  std::vector<int> right(int modes) const {
    std::vector<bool> in_left(modes, false);
    for (int m : left) {
      if (m < 0 || m >= modes) throw std::invalid_argument("BipartiteCut: mode out of range");
      if (in_left[m]) throw std::invalid_argument("BipartiteCut: repeated mode");
      in_left[m] = true;
    }
    std::vector<int> r;
    for (int m = 0; m < modes; ++m)
      if (!in_left[m]) r.push_back(m);
    if (left.empty() || r.empty())
      throw std::invalid_argument("BipartiteCut: both sides must be non-empty");
    return r;
  }
};

// Partial trace over the right modes of the cut.  Labels enumerate left-mode
// occupations sector by sector (total 0..N).
inline DensityMatrix reduced_density_matrix(const FockStateVector& state,
                                            const BipartiteCut& cut) {
  const FockBasis& b = *state.basis;
  if (b.statistics() != Statistics::Boson)
    throw std::invalid_argument("reduced_density_matrix: bosonic states only");
  const std::vector<int> right = cut.right(b.modes());
  const int left_modes = static_cast<int>(cut.left.size());
  const int n = b.particles();

  std::vector<std::vector<int>> labels;
  std::vector<std::size_t> offset;
  std::vector<std::shared_ptr<const FockBasis>> sectors;
  for (int k = 0; k <= n; ++k) {
    offset.push_back(labels.size());
    sectors.push_back(enumerate_basis(left_modes, k, Statistics::Boson));
    for (std::size_t i = 0; i < sectors.back()->size(); ++i)
      labels.push_back(sectors.back()->occupations(i));
  }
  auto left_index = [&](const std::vector<int>& occ, int total) {
    return offset[total] + sectors[total]->index_of(occ);
  };

  // group coefficients by the traced-out right occupation
  std::map<std::vector<int>, std::vector<std::pair<std::size_t, cxd>>> groups;
  std::vector<int> left_occ(left_modes), right_occ(right.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    const cxd amp = state.amplitudes[static_cast<Eigen::Index>(i)];
    if (amp == 0.0) continue;
    const auto& occ = b.occupations(i);
    int total = 0;
    for (int m = 0; m < left_modes; ++m) total += (left_occ[m] = occ[cut.left[m]]);
    for (std::size_t m = 0; m < right.size(); ++m) right_occ[m] = occ[right[m]];
    groups[right_occ].emplace_back(left_index(left_occ, total), amp);
  }

  DensityMatrix rho;
  rho.labels = std::move(labels);
  rho.statistics = Statistics::Boson;
  const auto dim = static_cast<Eigen::Index>(rho.labels.size());
  rho.matrix = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [right_part, entries] : groups) {
    for (const auto& [ia, ca] : entries)
      for (const auto& [ib, cb] : entries)
        rho.matrix(static_cast<Eigen::Index>(ia), static_cast<Eigen::Index>(ib)) +=
            ca * std::conj(cb);
  }
  return rho;
}

struct Entropies {
  double von_neumann;
  double renyi2;
};

// Natural-log entropies from the spectrum; the Renyi-2 entropy is reported
// non-negative, -log tr rho^2.
inline Entropies entropies(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  double svn = 0.0, sum_sq = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lambda = std::max(0.0, es.eigenvalues()[i]);
    if (lambda > 0.0) svn -= lambda * std::log(lambda);
    sum_sq += lambda * lambda;
  }
  return {svn, -std::log(sum_sq)};
}

inline Entropies entropies(const DensityMatrix& rho) { return entropies(rho.matrix); }

// ---------------------------------------------------------------------------
// twin-copy parity protocol

// |psi> x |psi> on 2L modes: copy one on modes 0..L-1, copy two on L..2L-1.
inline FockStateVector twin_copy_state(const FockStateVector& psi,
                                       std::size_t dimension_cap = kDefaultDimensionCap) {
  const FockBasis& b = *psi.basis;
  if (b.statistics() != Statistics::Boson)
    throw std::invalid_argument("twin_copy_state: bosonic states only");
  auto twin_basis = enumerate_basis(2 * b.modes(), 2 * b.particles(), Statistics::Boson,
                                    FockBasis::kUnrestricted, dimension_cap);
  auto twin = FockStateVector::zero(twin_basis);
  std::vector<int> occ(2 * b.modes());
  for (std::size_t i = 0; i < b.size(); ++i) {
    const cxd ai = psi.amplitudes[static_cast<Eigen::Index>(i)];
    if (ai == 0.0) continue;
    const auto& occ_i = b.occupations(i);
    std::copy(occ_i.begin(), occ_i.end(), occ.begin());
    for (std::size_t j = 0; j < b.size(); ++j) {
      const cxd aj = psi.amplitudes[static_cast<Eigen::Index>(j)];
      if (aj == 0.0) continue;
      const auto& occ_j = b.occupations(j);
      std::copy(occ_j.begin(), occ_j.end(), occ.begin() + b.modes());
      twin.amplitudes[static_cast<Eigen::Index>(twin_basis->index_of(occ))] = ai * aj;
    }
  }
  return twin;
}

// Number-dependent phase exp(i pi/2 n) on every copy-two site; turns the
// tunneling beamsplitter into the parity-protocol beamsplitter when applied
// before and after.
inline FockStateVector hubbard_bs_phase_correction(const FockStateVector& twin) {
  const FockBasis& b = *twin.basis;
  if (b.modes() % 2 != 0)
    throw std::invalid_argument("hubbard_bs_phase_correction: not a twin state");
  const int sites = b.modes() / 2;
  static const cxd ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  auto out = twin;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto& occ = b.occupations(i);
    int copy_two = 0;
    for (int s = 0; s < sites; ++s) copy_two += occ[sites + s];
    out.amplitudes[static_cast<Eigen::Index>(i)] *= ipow[copy_two % 4];
  }
  return out;
}

enum class TwinProtocol {
  Direct,                 // beamsplitter (a1 + a2, a1 - a2)/sqrt(2)
  TunnelingCorrected,     // tunneling beamsplitter with phase correction
  TunnelingUncorrected,   // tunneling beamsplitter alone: purity lower bound
};

// Interferes |psi> with its twin site by site and reads the copy-two parity
// over the subsystem sites.  Equals tr(rho_S^2) for Direct and
// TunnelingCorrected; TunnelingUncorrected yields the Cauchy-Schwarz lower
// bound tr(rho V rho V^dagger) with V = exp(i pi/2 n).
inline double twin_parity_purity(const FockStateVector& psi,
                                 const std::vector<int>& subsystem_sites,
                                 TwinProtocol protocol = TwinProtocol::Direct,
                                 std::size_t dimension_cap = kDefaultDimensionCap) {
  const int sites = psi.basis->modes();
  if (subsystem_sites.empty())
    throw std::invalid_argument("twin_parity_purity: empty subsystem");
  for (int s : subsystem_sites)
    if (s < 0 || s >= sites) throw std::out_of_range("twin_parity_purity: bad site");

  FockStateVector twin = twin_copy_state(psi, dimension_cap);
  if (protocol == TwinProtocol::TunnelingCorrected) twin = hubbard_bs_phase_correction(twin);

  Eigen::MatrixXcd u2(2, 2);
  if (protocol == TwinProtocol::Direct) {
    u2 << 1, 1, 1, -1;
    u2 /= std::sqrt(2.0);
  } else {
    u2 << cxd(0, 1), 1, 1, cxd(0, 1);
    u2 /= std::sqrt(2.0);
  }
  const ModeUnitary mixer{Eigen::MatrixXcd(u2)};
  for (int s = 0; s < sites; ++s) twin = apply_two_mode_unitary(twin, s, sites + s, mixer);
  if (protocol == TwinProtocol::TunnelingCorrected) twin = hubbard_bs_phase_correction(twin);

  const FockBasis& tb = *twin.basis;
  double parity = 0.0;
  for (std::size_t i = 0; i < tb.size(); ++i) {
    const double w = std::norm(twin.amplitudes[static_cast<Eigen::Index>(i)]);
    if (w == 0.0) continue;
    int copy_two = 0;
    for (int s : subsystem_sites) copy_two += tb.occupations(i)[sites + s];
    parity += (copy_two % 2 == 0) ? w : -w;
  }
  return parity;
}

// ---------------------------------------------------------------------------
// worked scenarios

struct QuenchEntropyTrace {
  std::vector<double> times;
  std::vector<double> renyi2;
  double peak_time = 0.0;
  double peak_renyi2 = 0.0;
  double dip_time = 0.0;   // reduced-entanglement point near Jt = pi/4
  double dip_renyi2 = 0.0;
};

// Half-system Renyi-2 entropy of the two-site quench from |1,1>, with the
// maximum and the reduced-entanglement point located numerically.
inline QuenchEntropyTrace quench_entropy_trace(double J, double U,
                                               const std::vector<double>& times) {
  if (!(J > 0.0)) throw std::domain_error("quench_entropy_trace: tunneling must be positive");
  HubbardParams params;
  params.tunneling = J;
  params.interaction = U;
  params.sites = 2;
  params.particles = 2;
  auto basis = hubbard_basis(params);
  const SpectralEvolver evolver(build_hamiltonian(params, *basis));
  const auto initial = FockStateVector::basis_state(basis, {1, 1});
  const BipartiteCut cut = BipartiteCut::first_modes(1);
  auto s2_at = [&](double t) {
    return entropies(reduced_density_matrix(evolver.evolve(initial, t), cut)).renyi2;
  };

  QuenchEntropyTrace trace;
  trace.times = times;
  trace.renyi2.reserve(times.size());
  for (double t : times) trace.renyi2.push_back(s2_at(t));

  // locate the maximum by scan plus golden-section refinement
  const double t_hi = std::max(M_PI / J, times.empty() ? 0.0 : times.back());
  const int grid = 4000;
  double best_t = 0.0, best_s = -1.0;
  for (int i = 0; i <= grid; ++i) {
    const double t = t_hi * i / grid;
    const double s = s2_at(t);
    if (s > best_s) {
      best_s = s;
      best_t = t;
    }
  }
  auto golden = [&](double lo, double hi, auto&& f, bool maximize) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 100; ++it) {
      const bool pick_left = maximize ? (f1 > f2) : (f1 < f2);
      if (pick_left) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - phi * (b - a);
        f1 = f(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + phi * (b - a);
        f2 = f(x2);
      }
    }
    return 0.5 * (a + b);
  };
  const double span = t_hi / grid;
  trace.peak_time = golden(std::max(0.0, best_t - span), best_t + span, s2_at, true);
  trace.peak_renyi2 = s2_at(trace.peak_time);

  // reduced-entanglement point in a window around Jt = pi/4
  const double window = 0.35 / J;
  const double centre = M_PI / (4.0 * J);
  trace.dip_time = golden(centre - window, centre + window, s2_at, false);
  trace.dip_renyi2 = s2_at(trace.dip_time);
  return trace;
}

struct PostselectedEntanglement {
  double p_separate;             // one atom per well after the beamsplitter
  FockStateVector conditional;   // normalized post-selected state
  double singlet_overlap;        // |<spin singlet | conditional>|
  int conditional_schmidt_rank;
  int full_output_schmidt_rank;
};

// Two bosonic atoms in opposite spin states through a balanced double-well
// beamsplitter; post-selecting one atom per well projects the spin sector
// onto the singlet.
inline PostselectedEntanglement postselected_spin_entanglement() {
  // modes: (left up, left down, right up, right down)
  auto basis = enumerate_basis(4, 2, Statistics::Boson);
  auto input = FockStateVector::basis_state(basis, {1, 0, 0, 1});

  const double r = 1.0 / std::sqrt(2.0);
  const cxd ir(0.0, r);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(4, 4);
  u(0, 0) = r; u(2, 0) = ir;   // left up    -> (left + i right) up
  u(1, 1) = r; u(3, 1) = ir;   // left down
  u(2, 2) = r; u(0, 2) = ir;   // right up   -> (right + i left) up
  u(3, 3) = r; u(1, 3) = ir;   // right down
  const Eigen::VectorXcd out = lift_to_fock(ModeUnitary(u), *basis) * input.amplitudes;

  PostselectedEntanglement result{0.0, FockStateVector::zero(basis), 0.0, 0, 0};
  Eigen::VectorXcd conditional = Eigen::VectorXcd::Zero(out.size());
  for (std::size_t i = 0; i < basis->size(); ++i) {
    const auto& occ = basis->occupations(i);
    if (occ[0] + occ[1] == 1) {  // one atom in the left well
      result.p_separate += std::norm(out[static_cast<Eigen::Index>(i)]);
      conditional[static_cast<Eigen::Index>(i)] = out[static_cast<Eigen::Index>(i)];
    }
  }
  conditional /= std::sqrt(result.p_separate);
  result.conditional = FockStateVector(basis, conditional);

  Eigen::VectorXcd singlet = Eigen::VectorXcd::Zero(out.size());
  singlet[basis->index_of({1, 0, 0, 1})] = r;
  singlet[basis->index_of({0, 1, 1, 0})] = -r;
  result.singlet_overlap = std::abs(singlet.dot(conditional));

  result.conditional_schmidt_rank =
      schmidt_spectrum(two_particle_amplitude(result.conditional)).rank;
  result.full_output_schmidt_rank =
      schmidt_spectrum(two_particle_amplitude(FockStateVector(basis, out))).rank;
  return result;
}

}  // namespace fock
