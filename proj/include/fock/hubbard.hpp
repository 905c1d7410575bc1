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

enum class Boundary { Periodic, Open };

// Nearest-neighbour Hubbard chain.  Spinful fermions double the mode count
// (mode = 2*site + spin); hard-core bosons restrict occupations to one.
struct HubbardParams {
  double tunneling = 1.0;   // J
  double interaction = 0.0; // U
  int sites = 2;
  int particles = 1;
  Boundary boundary = Boundary::Open;
  Statistics statistics = Statistics::Boson;
  bool spinful = false;
  bool hard_core = false;

  int modes() const { return spinful ? 2 * sites : sites; }

  void check() const {
    if (tunneling < 0.0) throw std::domain_error("HubbardParams: negative tunneling");
    if (sites < 2) throw std::domain_error("HubbardParams: need at least two sites");
    if (spinful && statistics != Statistics::Fermion)
      throw std::invalid_argument("HubbardParams: spinful flag is for fermions");
    if (hard_core && statistics != Statistics::Boson)
      throw std::invalid_argument("HubbardParams: hard_core flag is for bosons");
  }
};

inline std::shared_ptr<const FockBasis> hubbard_basis(
    const HubbardParams& p, std::size_t dimension_cap = kDefaultDimensionCap) {
  p.check();
  return enumerate_basis(p.modes(), p.particles, p.statistics,
                         p.hard_core ? 1 : FockBasis::kUnrestricted, dimension_cap);
}

namespace detail {

inline std::vector<std::pair<int, int>> chain_bonds(int sites, Boundary boundary) {
  std::vector<std::pair<int, int>> bonds;
  for (int i = 0; i + 1 < sites; ++i) bonds.emplace_back(i, i + 1);
  if (boundary == Boundary::Periodic && sites > 2) bonds.emplace_back(sites - 1, 0);
  return bonds;
}

// adds amp * a^dagger_to a_from |element j> into column j
inline void add_hop(Eigen::MatrixXcd& h, const FockBasis& basis, std::size_t j, int from, int to,
                    double amp) {
  const auto& occ = basis.occupations(j);
  if (occ[from] == 0) return;
  std::vector<int> moved = occ;
  double factor = 1.0;
  if (basis.statistics() == Statistics::Fermion) {
    if (moved[to] == 1) return;
    factor *= jw_sign(moved, from);
    moved[from] = 0;
    factor *= jw_sign(moved, to);
    moved[to] = 1;
  } else {
    if (basis.max_occupation() != FockBasis::kUnrestricted &&
        moved[to] + 1 > basis.max_occupation())
      return;  // hard-core projection
    factor *= std::sqrt(double(moved[from])) * std::sqrt(double(moved[to] + 1));
    moved[from] -= 1;
    moved[to] += 1;
  }
  h(static_cast<Eigen::Index>(basis.index_of(moved)), static_cast<Eigen::Index>(j)) +=
      amp * factor;
}

}  // namespace detail

// -J sum_<i,j> (a^dagger_i a_j + h.c.) + U/2 sum_j n_j (n_j - 1), or the
// spinful-fermion variant with on-site U n_up n_down.
inline Eigen::MatrixXcd build_hamiltonian(const HubbardParams& p, const FockBasis& basis) {
  p.check();
  if (basis.modes() != p.modes() || basis.particles() != p.particles ||
      basis.statistics() != p.statistics)
    throw basis_mismatch_error("build_hamiltonian: basis does not match parameters");
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  const auto bonds = detail::chain_bonds(p.sites, p.boundary);

  for (std::size_t j = 0; j < basis.size(); ++j) {
    for (const auto& [s1, s2] : bonds) {
      if (p.spinful) {
        for (int spin = 0; spin < 2; ++spin) {
          detail::add_hop(h, basis, j, 2 * s1 + spin, 2 * s2 + spin, -p.tunneling);
          detail::add_hop(h, basis, j, 2 * s2 + spin, 2 * s1 + spin, -p.tunneling);
        }
      } else {
        detail::add_hop(h, basis, j, s1, s2, -p.tunneling);
        detail::add_hop(h, basis, j, s2, s1, -p.tunneling);
      }
    }
    const auto& occ = basis.occupations(j);
    double diag = 0.0;
    if (p.spinful) {
      for (int s = 0; s < p.sites; ++s) diag += p.interaction * occ[2 * s] * occ[2 * s + 1];
    } else {
      for (int n : occ) diag += 0.5 * p.interaction * n * (n - 1);
    }
    h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) += diag;
  }
  return h;
}

// Exact time evolution through one Hermitian eigendecomposition; reusable
// across time points.
class SpectralEvolver {
 public:
  explicit SpectralEvolver(const Eigen::MatrixXcd& hamiltonian, double hermiticity_tol = 1e-12) {
    if ((hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff() >
        hermiticity_tol * std::max(1.0, hamiltonian.cwiseAbs().maxCoeff()))
      throw std::invalid_argument("SpectralEvolver: Hamiltonian not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hamiltonian);
    vectors_ = es.eigenvectors();
    values_ = es.eigenvalues();
  }

  Eigen::VectorXcd propagate(const Eigen::VectorXcd& amplitudes, double t) const {
    Eigen::VectorXcd phases(values_.size());
    for (Eigen::Index k = 0; k < values_.size(); ++k)
      phases[k] = std::polar(1.0, -values_[k] * t);
    return vectors_ * phases.asDiagonal() * (vectors_.adjoint() * amplitudes);
  }

  FockStateVector evolve(const FockStateVector& state, double t) const {
    return FockStateVector(state.basis, propagate(state.amplitudes, t));
  }

  const Eigen::VectorXd& eigenvalues() const { return values_; }
  const Eigen::MatrixXcd& eigenvectors() const { return vectors_; }

  FockStateVector ground_state(std::shared_ptr<const FockBasis> basis) const {
    return FockStateVector(std::move(basis), vectors_.col(0));
  }

 private:
  Eigen::MatrixXcd vectors_;
  Eigen::VectorXd values_;
};

inline FockStateVector evolve(const FockStateVector& state, const Eigen::MatrixXcd& hamiltonian,
                              double t) {
  return SpectralEvolver(hamiltonian).evolve(state, t);
}

// P_{1,1}(t) = 1 - (16 J^2 / Omega^2) sin^2(Omega t / 2), Omega^2 = 16 J^2 + U^2.
inline double double_well_p11(double J, double U, double t) {
  if (!(J > 0.0)) throw std::domain_error("double_well_p11: tunneling must be positive");
  const double omega2 = 16.0 * J * J + U * U;
  const double omega = std::sqrt(omega2);
  const double s = std::sin(omega * t / 2.0);
  return 1.0 - (16.0 * J * J / omega2) * s * s;
}

inline double double_well_hom_time(double J) { return M_PI / (4.0 * J); }

// ---------------------------------------------------------------------------
// two spinful fermions in a double well

enum class DoubleWellState { Singlet, Triplet, Plus, Minus };

struct FermiDoubleWellAmplitudes {
  cxd singlet, triplet, plus, minus;
};

// Exact dynamics in the basis {S, T, +, -} from the microscopic two-site
// spinful Hamiltonian.  |T> and |-> are stationary (energies 0 and U); the
// {S, +} pair follows the same two-level dynamics as the bosonic double well.
inline FermiDoubleWellAmplitudes fermi_double_well_dynamics(double J, double U,
                                                            DoubleWellState initial, double t) {
  HubbardParams p;
  p.tunneling = J;
  p.interaction = U;
  p.sites = 2;
  p.particles = 2;
  p.statistics = Statistics::Fermion;
  p.spinful = true;
  auto basis = hubbard_basis(p);
  const Eigen::MatrixXcd h = build_hamiltonian(p, *basis);

  // modes: (site1 up, site1 down, site2 up, site2 down)
  auto ket = [&](std::initializer_list<int> occ) {
    return FockStateVector::basis_state(basis, std::vector<int>(occ)).amplitudes;
  };
  const Eigen::VectorXcd up_down = ket({1, 0, 0, 1});
  const Eigen::VectorXcd down_up = ket({0, 1, 1, 0});
  const Eigen::VectorXcd both_left = ket({1, 1, 0, 0});
  const Eigen::VectorXcd both_right = ket({0, 0, 1, 1});
  const double r = 1.0 / std::sqrt(2.0);
  const Eigen::VectorXcd s_vec = r * (up_down - down_up);
  const Eigen::VectorXcd t_vec = r * (up_down + down_up);
  const Eigen::VectorXcd plus_vec = r * (both_left + both_right);
  const Eigen::VectorXcd minus_vec = r * (both_left - both_right);

  const Eigen::VectorXcd* start = nullptr;
  switch (initial) {
    case DoubleWellState::Singlet: start = &s_vec; break;
    case DoubleWellState::Triplet: start = &t_vec; break;
    case DoubleWellState::Plus: start = &plus_vec; break;
    case DoubleWellState::Minus: start = &minus_vec; break;
  }
  if (!start) throw std::invalid_argument("fermi_double_well_dynamics: bad initial state");

  SpectralEvolver evolver(h);
  const Eigen::VectorXcd evolved = evolver.propagate(*start, t);
  return {s_vec.dot(evolved), t_vec.dot(evolved), plus_vec.dot(evolved),
          minus_vec.dot(evolved)};
}

// ---------------------------------------------------------------------------
// N bosons in a double well: collective-spin representation

// Spin S = N/2 operators on dimension N+1; index i corresponds to n1 = N - i
// particles in the first well, i.e. Sz eigenvalue m = N/2 - i.  Ordering
// matches the lex-descending Fock enumeration of (n1, N - n1).
struct SpinOperators {
  Eigen::MatrixXcd sx, sy, sz;
  int n_particles = 0;

  static SpinOperators make(int n_particles) {
    if (n_particles < 1) throw std::domain_error("SpinOperators: need at least one particle");
    const int dim = n_particles + 1;
    const double S = 0.5 * n_particles;
    Eigen::MatrixXcd sp = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::MatrixXcd sz = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
      const double m = S - i;
      sz(i, i) = m;
      if (i > 0) sp(i - 1, i) = std::sqrt(S * (S + 1) - m * (m + 1));  // raises m
    }
    SpinOperators ops;
    ops.n_particles = n_particles;
    ops.sz = std::move(sz);
    ops.sx = 0.5 * (sp + sp.adjoint());
    ops.sy = cxd(0.0, -0.5) * (sp - sp.adjoint());
    return ops;
  }
};

// -2 J Sx + U Sz^2 (constant terms dropped; they only shift the spectrum)
inline Eigen::MatrixXcd lmg_hamiltonian(int n_particles, double J, double U) {
  auto ops = SpinOperators::make(n_particles);
  return Eigen::MatrixXcd(-2.0 * J * ops.sx + U * ops.sz * ops.sz);
}

struct LmgDistribution {
  std::vector<double> direct;           // P_{n1, N-n1} indexed by n1 = 0..N
  std::vector<double> moment_inverted;  // reconstruction from <Sz^n> moments
  bool moment_path_reliable = true;     // Vandermonde conditioning cap N <= 12
};

// Occupation distribution of the N-particle double well at time t, starting
// from |initial_n1, N - initial_n1>.  Computed twice: directly from the
// evolved state, and by inverting the moment relation
// <Sz^n> = sum_m (m - N/2)^n P_m.  The Vandermonde system is solved in the
// node-scaled variable; past N = 12 its conditioning makes the
// reconstruction unreliable and the flag says so.
inline LmgDistribution lmg_distribution(int n_particles, double J, double U, double t,
                                        int initial_n1 = -1) {
  if (n_particles < 1 || n_particles > 40)
    throw std::domain_error("lmg_distribution: particle number outside [1, 40]");
  if (initial_n1 < 0) initial_n1 = n_particles / 2;
  if (initial_n1 > n_particles)
    throw std::domain_error("lmg_distribution: initial occupation exceeds particle number");
  const int dim = n_particles + 1;
  const double S = 0.5 * n_particles;

  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(dim);
  psi0[n_particles - initial_n1] = 1.0;  // index i = N - n1
  SpectralEvolver evolver(lmg_hamiltonian(n_particles, J, U));
  const Eigen::VectorXcd psi = evolver.propagate(psi0, t);

  LmgDistribution result;
  result.direct.assign(dim, 0.0);
  for (int i = 0; i < dim; ++i) result.direct[n_particles - i] = std::norm(psi[i]);

  // moments of Sz are diagonal in this basis
  const double scale = std::max(S, 1.0);
  Eigen::VectorXd moments(dim);
  for (int n = 0; n < dim; ++n) {
    double acc = 0.0;
    for (int i = 0; i < dim; ++i) acc += std::norm(psi[i]) * std::pow((S - i) / scale, n);
    moments[n] = acc;
  }
  Eigen::MatrixXd vander(dim, dim);
  for (int n = 0; n < dim; ++n)
    for (int m = 0; m < dim; ++m) vander(n, m) = std::pow((m - S) / scale, n);
  const Eigen::VectorXd p = vander.colPivHouseholderQr().solve(moments);
  result.moment_inverted.assign(dim, 0.0);
  for (int m = 0; m < dim; ++m) result.moment_inverted[m] = p[m];
  result.moment_path_reliable = n_particles <= 12;
  return result;
}

// ---------------------------------------------------------------------------
// 1D lattice propagators and few-particle correlators

// Infinite-lattice single-particle amplitude from site `from` to site `to`:
// i^(to-from) J_(to-from)(2 J t).
inline cxd lattice_propagator_infinite(int from, int to, double J, double t) {
  const int d = to - from;
  const int ad = d < 0 ? -d : d;
  double bessel = std::cyl_bessel_j(static_cast<double>(ad), 2.0 * J * t);
  if (d < 0 && ad % 2 == 1) bessel = -bessel;  // J_{-n} = (-1)^n J_n
  static const cxd ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return ipow[((d % 4) + 4) % 4] * bessel;
}

// Finite-lattice propagator matrix A(m, n) = amplitude n -> m.  Periodic
// chains use the exact quasimomentum sum; open chains the one-body
// eigendecomposition.
inline Eigen::MatrixXcd lattice_propagator_matrix(int sites, Boundary boundary, double J,
                                                  double t) {
  if (sites < 2) throw std::domain_error("lattice_propagator_matrix: need at least two sites");
  Eigen::MatrixXcd a(sites, sites);
  if (boundary == Boundary::Periodic) {
    for (int m = 0; m < sites; ++m) {
      for (int n = 0; n < sites; ++n) {
        cxd acc = 0.0;
        for (int k = 0; k < sites; ++k) {
          const double q = 2.0 * M_PI * k / sites;
          acc += std::polar(1.0, q * (m - n) + 2.0 * J * t * std::cos(q));
        }
        a(m, n) = acc / static_cast<double>(sites);
      }
    }
    return a;
  }
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(sites, sites);
  for (int i = 0; i + 1 < sites; ++i) h(i, i + 1) = h(i + 1, i) = -J;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  Eigen::VectorXcd phases(sites);
  for (int k = 0; k < sites; ++k) phases[k] = std::polar(1.0, -es.eigenvalues()[k] * t);
  a = es.eigenvectors().cast<cxd>() * phases.asDiagonal() *
      es.eigenvectors().transpose().cast<cxd>();
  return a;
}

struct Lattice {
  enum class Kind { Infinite, Periodic, Open } kind = Kind::Infinite;
  int sites = 0;

  static Lattice infinite() { return {Kind::Infinite, 0}; }
  static Lattice periodic(int sites) { return {Kind::Periodic, sites}; }
  static Lattice open(int sites) { return {Kind::Open, sites}; }
};

// Joint transition probability for particles starting on `initial_sites` and
// detected on `final_sites`: |perm A|^2 over multiplicity factors for free
// bosons, |det A|^2 for the fermionized / hard-core limit.
inline double lattice_correlator(const std::vector<int>& initial_sites,
                                 const std::vector<int>& final_sites, double J, double t,
                                 Statistics statistics, Lattice lattice = Lattice::infinite()) {
  if (initial_sites.size() != final_sites.size())
    throw std::invalid_argument("lattice_correlator: site lists differ in length");
  const int n = static_cast<int>(initial_sites.size());
  Eigen::MatrixXcd propagator;
  if (lattice.kind != Lattice::Kind::Infinite)
    propagator = lattice_propagator_matrix(
        lattice.sites, lattice.kind == Lattice::Kind::Periodic ? Boundary::Periodic : Boundary::Open,
        J, t);

  Eigen::MatrixXcd sub(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      sub(i, j) = lattice.kind == Lattice::Kind::Infinite
                      ? lattice_propagator_infinite(initial_sites[i], final_sites[j], J, t)
                      : propagator(final_sites[j], initial_sites[i]);

  auto multiplicity_norm = [](const std::vector<int>& sites) {
    double norm = 1.0;
    std::vector<int> sorted = sites;
    std::sort(sorted.begin(), sorted.end());
    int run = 1;
    for (std::size_t i = 1; i <= sorted.size(); ++i) {
      if (i < sorted.size() && sorted[i] == sorted[i - 1]) {
        norm *= ++run;
      } else {
        run = 1;
      }
    }
    return norm;
  };

  switch (statistics) {
    case Statistics::Boson: {
      const cxd perm = n <= 6 ? permanent_naive(sub) : permanent_ryser(sub);
      return std::norm(perm) / (multiplicity_norm(initial_sites) * multiplicity_norm(final_sites));
    }
    case Statistics::Fermion:
      return std::norm(determinant(sub));
    default:
      throw std::invalid_argument("lattice_correlator: bosons or fermions only");
  }
}

// ---------------------------------------------------------------------------
// interaction-bound pair

struct DoublonWalk {
  FockStateVector state;        // effective bound-state wavefunction on (sites, 2)
  bool within_validity;         // U >= 10 J
  double bessel_argument;       // 4 J^2 t / U
};

// Effective doublon wavefunction sum_n i^n J_n(4 J^2 t / U) |2 at n>, centred
// on sites/2 and renormalized after lattice truncation.
inline DoublonWalk doublon_walk(double J, double U, double t, int sites) {
  if (U <= 0.0) throw std::domain_error("doublon_walk: interaction must be positive");
  auto basis = enumerate_basis(sites, 2, Statistics::Boson);
  auto state = FockStateVector::zero(basis);
  const int centre = sites / 2;
  const double x = 4.0 * J * J * t / U;
  std::vector<int> occ(sites, 0);
  for (int s = 0; s < sites; ++s) {
    occ.assign(sites, 0);
    occ[s] = 2;
    state.amplitudes[static_cast<Eigen::Index>(basis->index_of(occ))] =
        lattice_propagator_infinite(centre, s, 1.0, x / 2.0);  // i^(s-c) J_(s-c)(x)
  }
  const double norm = state.norm();
  if (norm > 0.0) state.amplitudes /= norm;
  return {std::move(state), U >= 10.0 * J, x};
}

// P(n_site = 2) per site
inline std::vector<double> double_occupancy_profile(const FockStateVector& state) {
  const FockBasis& b = *state.basis;
  std::vector<double> profile(b.modes(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double w = std::norm(state.amplitudes[static_cast<Eigen::Index>(i)]);
    if (w == 0.0) continue;
    const auto& occ = b.occupations(i);
    for (int s = 0; s < b.modes(); ++s)
      if (occ[s] == 2) profile[s] += w;
  }
  return profile;
}

}  // namespace fock
