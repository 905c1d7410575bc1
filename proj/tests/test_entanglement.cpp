#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fock/entanglement.hpp"
#include "fock/hubbard.hpp"

using namespace fock;

namespace {

std::mt19937& rng() {
  static std::mt19937 r(20250810);
  return r;
}

Eigen::MatrixXcd random_complex(int rows, int cols) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cxd(g(rng()), g(rng()));
  return m;
}

Eigen::MatrixXcd random_unitary(int n) {
  Eigen::MatrixXcd z = random_complex(n, n);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
  return q;
}

FockStateVector random_state(std::shared_ptr<const FockBasis> basis) {
  Eigen::VectorXcd amps = random_complex(static_cast<int>(basis->size()), 1);
  amps.normalize();
  return FockStateVector(std::move(basis), std::move(amps));
}

// tensor-space evaluation of <psi| P x (I-P) + (I-P) x P |psi>, independent
// of the reduced formula used by the library
double csop_expectation_tensor(const Eigen::MatrixXcd& v, const Eigen::VectorXcd& p) {
  const int d = static_cast<int>(v.rows());
  const Eigen::MatrixXcd proj = p * p.adjoint();
  const Eigen::MatrixXcd comp = Eigen::MatrixXcd::Identity(d, d) - proj;
  Eigen::VectorXcd psi(d * d);
  for (int q = 0; q < d; ++q)
    for (int j = 0; j < d; ++j) psi[q * d + j] = v(q, j);
  Eigen::MatrixXcd ep = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e)
          ep(a * d + b, c * d + e) = proj(a, c) * comp(b, e) + comp(a, c) * proj(b, e);
  return (psi.adjoint() * ep * psi).real()(0, 0);
}

TwoParticleAmplitude hom_input_amplitude() {
  Eigen::MatrixXcd v(2, 2);
  v << 0, 1, 1, 0;
  return TwoParticleAmplitude(v);
}

TwoParticleAmplitude hom_output_amplitude() {
  Eigen::MatrixXcd v(2, 2);
  v << 1, 0, 0, 1;
  return TwoParticleAmplitude(v);
}

// two distinguishable-ish degrees of freedom: position x spin, the spin
// triplet rotated Bell state; basis (L up, L down, R up, R down)
TwoParticleAmplitude bell_phi_x_amplitude() {
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(4, 4);
  v(0, 3) = v(3, 0) = 0.5;
  v(1, 2) = v(2, 1) = 0.5;
  return TwoParticleAmplitude(v);
}

}  // namespace

TEST_CASE("takagi factorization on random symmetric matrices") {
  for (int d : {2, 3, 4, 6}) {
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::MatrixXcd a = random_complex(d, d);
      Eigen::MatrixXcd v = a + a.transpose();
      auto [w, sigma] = takagi(v);
      REQUIRE((w.adjoint() * w - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-10);
      REQUIRE((w * sigma.asDiagonal() * w.transpose() - v).cwiseAbs().maxCoeff() < 1e-10);
      for (int k = 0; k + 1 < d; ++k) REQUIRE(sigma[k] >= sigma[k + 1]);
    }
  }
}

TEST_CASE("takagi handles rank deficiency and degenerate spectra") {
  // rank-1 sandwich
  Eigen::VectorXcd a = random_complex(5, 1);
  Eigen::MatrixXcd v1 = a * a.transpose();
  auto r1 = takagi(v1);
  CHECK(r1.sigma[0] > 0.0);
  for (int k = 1; k < 5; ++k) CHECK(r1.sigma[k] < 1e-10);

  // fully degenerate: the Bell-type amplitude with all coefficients 1/2
  auto rx = takagi(bell_phi_x_amplitude().matrix());
  for (int k = 0; k < 4; ++k) CHECK(rx.sigma[k] == Catch::Approx(0.5).margin(1e-12));

  // symmetric unitary with doubly degenerate spectrum
  Eigen::MatrixXcd u = random_unitary(3);
  Eigen::MatrixXcd v = u * u.transpose();
  auto ru = takagi(v);
  for (int k = 0; k < 3; ++k) CHECK(ru.sigma[k] == Catch::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("schmidt spectra of the canonical two-particle states") {
  auto s_in = schmidt_spectrum(hom_input_amplitude());
  CHECK(s_in.rank == 2);
  CHECK(s_in.coefficients[0] == Catch::Approx(1.0 / std::sqrt(2.0)));
  CHECK(s_in.coefficients[1] == Catch::Approx(1.0 / std::sqrt(2.0)));
  // diagonalizing states are balanced superpositions of the two wells
  for (int col = 0; col < 2; ++col)
    for (int row = 0; row < 2; ++row)
      CHECK(std::abs(s_in.basis(row, col)) == Catch::Approx(1.0 / std::sqrt(2.0)));

  CHECK(schmidt_spectrum(hom_output_amplitude()).rank == 2);

  Eigen::MatrixXcd doublon = Eigen::MatrixXcd::Zero(3, 3);
  doublon(1, 1) = 1.0;
  CHECK(schmidt_spectrum(TwoParticleAmplitude(doublon)).rank == 1);

  auto sx = schmidt_spectrum(bell_phi_x_amplitude());
  CHECK(sx.rank == 4);
  for (int k = 0; k < 4; ++k) CHECK(sx.coefficients[k] == Catch::Approx(0.5).margin(1e-10));
}

TEST_CASE("schmidt rank is invariant under single-particle unitaries") {
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 4;
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(d, d);
    const int rank = 1 + trial % 3;
    for (int k = 0; k < rank; ++k) {
      Eigen::VectorXcd a = random_complex(d, 1);
      v += a * a.transpose();
    }
    TwoParticleAmplitude amp(v);
    const int r0 = schmidt_spectrum(amp).rank;
    const Eigen::MatrixXcd u = random_unitary(d);
    TwoParticleAmplitude rotated(Eigen::MatrixXcd(u * amp.matrix() * u.transpose()));
    REQUIRE(schmidt_spectrum(rotated).rank == r0);
  }
}

TEST_CASE("two-particle amplitude from second quantization") {
  auto basis = enumerate_basis(2, 2, Statistics::Boson);

  auto v11 = two_particle_amplitude(FockStateVector::basis_state(basis, {1, 1}));
  CHECK((v11.matrix() - hom_input_amplitude().matrix()).cwiseAbs().maxCoeff() < 1e-14);

  Eigen::VectorXcd plus(3);
  plus << 1.0 / std::sqrt(2.0), 0.0, 1.0 / std::sqrt(2.0);
  auto vplus = two_particle_amplitude(FockStateVector(basis, plus));
  CHECK((vplus.matrix() - hom_output_amplitude().matrix()).cwiseAbs().maxCoeff() < 1e-14);

  // delocalized pair after an interaction-bound walk
  auto walk = doublon_walk(1.0, 20.0, 10.0, 7);
  auto vwalk = two_particle_amplitude(walk.state);
  CHECK(schmidt_spectrum(vwalk).rank >= 3);
  CHECK(particle_entangled(vwalk) == ParticleClassification::Entangled);
}

TEST_CASE("classification matches the rank criterion") {
  Eigen::MatrixXcd same = Eigen::MatrixXcd::Zero(2, 2);
  same(0, 0) = 1.0;
  CHECK(particle_entangled(TwoParticleAmplitude(same)) == ParticleClassification::SameState);
  CHECK(particle_entangled(hom_input_amplitude()) ==
        ParticleClassification::SymmetrizedProduct);
  CHECK(particle_entangled(bell_phi_x_amplitude()) == ParticleClassification::Entangled);

  // non-interacting walk from distinct sites keeps the symmetrized-product form
  const double J = 1.0, t = 1.2;
  const int L = 9;
  auto p = []() {
    HubbardParams q;
    q.sites = 9;
    q.particles = 2;
    q.boundary = Boundary::Periodic;
    return q;
  }();
  auto basis = hubbard_basis(p);
  SpectralEvolver evolver(build_hamiltonian(p, *basis));
  std::vector<int> occ0(L, 0);
  occ0[4] = occ0[5] = 1;
  auto evolved = evolver.evolve(FockStateVector::basis_state(basis, occ0), t);
  CHECK(particle_entangled(two_particle_amplitude(evolved)) ==
        ParticleClassification::SymmetrizedProduct);
  (void)J;
}

TEST_CASE("csop expectation agrees with the explicit tensor operator") {
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 3;
    Eigen::MatrixXcd a = random_complex(d, d);
    TwoParticleAmplitude v(Eigen::MatrixXcd(a + a.transpose()));
    Eigen::VectorXcd p = random_complex(d, 1);
    p.normalize();
    REQUIRE(std::abs(csop_expectation(v, p) - csop_expectation_tensor(v.matrix(), p)) < 1e-12);
  }
}

TEST_CASE("csop projectors for the HOM states") {
  auto in = csop_check(hom_input_amplitude());
  REQUIRE(in.kind == CsopResult::Kind::ProjectorFound);
  CHECK(in.expectation == Catch::Approx(1.0).margin(1e-10));
  // the projector state is one of the wells
  REQUIRE(in.projector_state.has_value());
  const Eigen::VectorXcd p_in = *in.projector_state;
  CHECK(std::abs(std::abs(p_in[0]) - std::abs(p_in[1])) > 0.99);  // localized

  auto out = csop_check(hom_output_amplitude());
  REQUIRE(out.kind == CsopResult::Kind::ProjectorFound);
  CHECK(out.expectation == Catch::Approx(1.0).margin(1e-10));
  const Eigen::VectorXcd p_out = *out.projector_state;
  CHECK(std::abs(p_out[0]) == Catch::Approx(1.0 / std::sqrt(2.0)));  // balanced superposition
  CHECK(std::abs(p_out[1]) == Catch::Approx(1.0 / std::sqrt(2.0)));

  Eigen::MatrixXcd same = Eigen::MatrixXcd::Zero(3, 3);
  same(2, 2) = 1.0;
  CHECK(csop_check(TwoParticleAmplitude(same)).kind == CsopResult::Kind::SameState);
}

TEST_CASE("csop certifies absence for the particle-entangled Bell state") {
  auto res = csop_check(bell_phi_x_amplitude());
  REQUIRE(res.kind == CsopResult::Kind::NoProjector);
  CHECK(res.sweep_max < 1.0 - 1e-3);
}

TEST_CASE("rank-2 with unequal coefficients: symmetrized product of non-orthogonal states") {
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(3, 3);
  v(0, 0) = 0.9;
  v(1, 1) = std::sqrt(1.0 - 0.81);
  TwoParticleAmplitude amp(v);
  CHECK(particle_entangled(amp) == ParticleClassification::SymmetrizedProduct);
  auto res = csop_check(amp);
  CHECK(res.kind == CsopResult::Kind::NoProjector);
  CHECK_FALSE(res.constituents_orthogonal);
  CHECK(res.sweep_max < 1.0 - 1e-3);
}

TEST_CASE("reduced density matrices") {
  auto basis = enumerate_basis(2, 2, Statistics::Boson);
  const BipartiteCut cut = BipartiteCut::first_modes(1);

  auto product = reduced_density_matrix(FockStateVector::basis_state(basis, {1, 1}), cut);
  product.validate();
  CHECK(product.purity() == Catch::Approx(1.0));

  Eigen::VectorXcd cat(3);
  cat << 1.0 / std::sqrt(2.0), 0.0, 1.0 / std::sqrt(2.0);
  auto rho = reduced_density_matrix(FockStateVector(basis, cat), cut);
  rho.validate();
  CHECK(rho.purity() == Catch::Approx(0.5));
  // diagonal weights sit on n_left = 0 and n_left = 2
  for (std::size_t i = 0; i < rho.labels.size(); ++i) {
    const double expect = (rho.labels[i][0] == 1) ? 0.0 : 0.5;
    CHECK(std::abs(rho.matrix(i, i) - cxd(expect)) < 1e-14);
  }

  CHECK_THROWS_AS(
      reduced_density_matrix(FockStateVector::basis_state(basis, {1, 1}), BipartiteCut{{0, 1}}),
      std::invalid_argument);
}

TEST_CASE("cut purity is symmetric and spectra match the schmidt coefficients") {
  auto basis = enumerate_basis(4, 3, Statistics::Boson);
  for (int trial = 0; trial < 10; ++trial) {
    auto psi = random_state(basis);
    const BipartiteCut left = BipartiteCut::first_modes(2);
    const BipartiteCut right{{2, 3}};
    auto rho_l = reduced_density_matrix(psi, left);
    auto rho_r = reduced_density_matrix(psi, right);
    REQUIRE(std::abs(rho_l.purity() - rho_r.purity()) < 1e-12);
    REQUIRE(std::abs(rho_l.trace() - 1.0) < 1e-12);
    REQUIRE(std::abs(entropies(rho_l).renyi2 - entropies(rho_r).renyi2) < 1e-12);

    // eigenvalues equal squared Schmidt coefficients of the coefficient matrix
    Eigen::MatrixXcd coeff = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rho_l.labels.size()),
                                                    static_cast<Eigen::Index>(rho_r.labels.size()));
    auto find_label = [](const std::vector<std::vector<int>>& labels, const std::vector<int>& occ) {
      return std::distance(labels.begin(), std::find(labels.begin(), labels.end(), occ));
    };
    for (std::size_t i = 0; i < basis->size(); ++i) {
      const auto& occ = basis->occupations(i);
      const std::vector<int> lo{occ[0], occ[1]}, ro{occ[2], occ[3]};
      coeff(find_label(rho_l.labels, lo), find_label(rho_r.labels, ro)) =
          psi.amplitudes[static_cast<Eigen::Index>(i)];
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(coeff);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_l.matrix, Eigen::EigenvaluesOnly);
    Eigen::VectorXd schmidt_sq = svd.singularValues().array().square();
    std::sort(schmidt_sq.data(), schmidt_sq.data() + schmidt_sq.size());
    Eigen::VectorXd eig = es.eigenvalues();
    const Eigen::Index offset = eig.size() - schmidt_sq.size();
    for (Eigen::Index k = 0; k < schmidt_sq.size(); ++k)
      REQUIRE(std::abs(eig[offset + k] - schmidt_sq[k]) < 1e-10);
  }
}

TEST_CASE("entropy values and ordering") {
  Eigen::MatrixXcd pure = Eigen::MatrixXcd::Zero(3, 3);
  pure(0, 0) = 1.0;
  auto e = entropies(pure);
  CHECK(e.von_neumann == Catch::Approx(0.0).margin(1e-12));
  CHECK(e.renyi2 == Catch::Approx(0.0).margin(1e-12));

  Eigen::MatrixXcd half = Eigen::MatrixXcd::Zero(2, 2);
  half(0, 0) = half(1, 1) = 0.5;
  e = entropies(half);
  CHECK(e.von_neumann == Catch::Approx(std::log(2.0)));
  CHECK(e.renyi2 == Catch::Approx(std::log(2.0)));

  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXcd a = random_complex(4, 4);
    Eigen::MatrixXcd rho = a * a.adjoint();
    rho /= rho.trace().real();
    auto s = entropies(rho);
    REQUIRE(s.renyi2 <= s.von_neumann + 1e-12);
    REQUIRE(rho.rows() * std::exp(-s.renyi2) >= 1.0 - 1e-12);  // purity >= 1/d
  }
}

TEST_CASE("twin parity protocol equals the partial-trace purity") {
  const std::vector<std::pair<int, int>> shapes{{2, 2}, {3, 2}, {2, 3}, {4, 2}};
  for (auto [L, N] : shapes) {
    auto basis = enumerate_basis(L, N, Statistics::Boson);
    for (int trial = 0; trial < 5; ++trial) {
      auto psi = random_state(basis);
      // global purity of a pure state
      std::vector<int> all_sites;
      for (int s = 0; s < L; ++s) all_sites.push_back(s);
      REQUIRE(std::abs(twin_parity_purity(psi, all_sites) - 1.0) < 1e-10);

      // subsystem purity against the reduced density matrix
      for (int cut_size = 1; cut_size < L; ++cut_size) {
        std::vector<int> sites;
        for (int s = 0; s < cut_size; ++s) sites.push_back(s);
        const double reference =
            reduced_density_matrix(psi, BipartiteCut::first_modes(cut_size)).purity();
        for (auto protocol : {TwinProtocol::Direct, TwinProtocol::TunnelingCorrected}) {
          REQUIRE(std::abs(twin_parity_purity(psi, sites, protocol) - reference) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("twin parity on the two-site cat state") {
  auto basis = enumerate_basis(2, 2, Statistics::Boson);
  Eigen::VectorXcd cat(3);
  cat << 1.0 / std::sqrt(2.0), 0.0, 1.0 / std::sqrt(2.0);
  FockStateVector psi(basis, cat);
  CHECK(twin_parity_purity(psi, {0}) == Catch::Approx(0.5).margin(1e-10));
  CHECK(twin_parity_purity(psi, {0, 1}) == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("uncorrected tunneling protocol is a lower bound and matches its closed form") {
  const std::vector<std::pair<int, int>> shapes{{2, 2}, {3, 2}, {2, 3}};
  for (auto [L, N] : shapes) {
    auto basis = enumerate_basis(L, N, Statistics::Boson);
    for (int trial = 0; trial < 5; ++trial) {
      auto psi = random_state(basis);
      std::vector<int> sites{0};
      const double corrected = twin_parity_purity(psi, sites, TwinProtocol::TunnelingCorrected);
      const double uncorrected =
          twin_parity_purity(psi, sites, TwinProtocol::TunnelingUncorrected);
      REQUIRE(uncorrected <= corrected + 1e-10);

      // closed form tr(rho V rho V^dagger) with V = exp(i pi/2 n)
      auto rho = reduced_density_matrix(psi, BipartiteCut::first_modes(1));
      Eigen::VectorXcd phases(static_cast<Eigen::Index>(rho.labels.size()));
      static const cxd ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      for (std::size_t i = 0; i < rho.labels.size(); ++i)
        phases[static_cast<Eigen::Index>(i)] = ipow[rho.labels[i][0] % 4];
      const Eigen::MatrixXcd v = phases.asDiagonal();
      const double expected = (rho.matrix * v * rho.matrix * v.adjoint()).trace().real();
      REQUIRE(std::abs(uncorrected - expected) < 1e-10);
    }
  }

  // Fock-state inputs: the phase is global, both protocols coincide
  auto basis = enumerate_basis(3, 2, Statistics::Boson);
  for (std::size_t i = 0; i < basis->size(); ++i) {
    auto fockstate = FockStateVector::basis_state(basis, basis->occupations(i));
    const double corrected = twin_parity_purity(fockstate, {0, 1}, TwinProtocol::TunnelingCorrected);
    const double uncorrected =
        twin_parity_purity(fockstate, {0, 1}, TwinProtocol::TunnelingUncorrected);
    REQUIRE(std::abs(corrected - uncorrected) < 1e-12);
  }
}

TEST_CASE("hubbard ground state keeps high single-site purity at strong coupling") {
  HubbardParams p;
  p.tunneling = 1.0;
  p.interaction = 10.0;
  p.sites = 2;
  p.particles = 2;
  auto basis = hubbard_basis(p);
  SpectralEvolver evolver(build_hamiltonian(p, *basis));
  auto ground = evolver.ground_state(basis);
  CHECK(twin_parity_purity(ground, {0}) >= 0.9);
}

TEST_CASE("quench entropy trace") {
  const double J = 1.0;
  auto trace = quench_entropy_trace(J, 0.0, {0.0, M_PI / (4 * J)});
  CHECK(trace.renyi2[0] == Catch::Approx(0.0).margin(1e-12));
  CHECK(trace.renyi2[1] == Catch::Approx(std::log(2.0)).margin(1e-10));

  // balanced three-state superposition bounds the half-system entropy
  CHECK(trace.peak_renyi2 == Catch::Approx(std::log(3.0)).margin(1e-9));
  const double expected_peak = std::acos(1.0 / std::sqrt(3.0)) / (2 * J);
  CHECK(std::abs(std::fmod(trace.peak_time, M_PI / (2 * J)) - expected_peak) < 1e-5);

  CHECK(trace.dip_time == Catch::Approx(M_PI / (4 * J)).margin(1e-5));
  CHECK(trace.dip_renyi2 == Catch::Approx(std::log(2.0)).margin(1e-9));
}

TEST_CASE("measurement-induced spin entanglement by post-selection") {
  auto res = postselected_spin_entanglement();
  CHECK(res.p_separate == Catch::Approx(0.5).epsilon(1e-12));
  CHECK(res.singlet_overlap == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(res.conditional_schmidt_rank == 4);
  CHECK(res.full_output_schmidt_rank == 2);
}
