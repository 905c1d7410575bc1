#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>

#include "fock/distinguishability.hpp"
#include "fock/interference.hpp"

using namespace fock;

namespace {

// Full Fock simulation with the internal label as one extra orthogonal mode
// per physical mode.  Modes: 0 = in1/label A, 1 = in2/label A, 2 = in1/label
// B, 3 = in2/label B; the beamsplitter acts on the spatial index only.
TwoParticleProbs simulated_overlap_probs(double R, double theta, Statistics stats) {
  auto basis = enumerate_basis(4, 2, stats);
  auto psi = FockStateVector::zero(basis);
  psi.amplitudes[static_cast<Eigen::Index>(basis->index_of({1, 1, 0, 0}))] = std::cos(theta);
  psi.amplitudes[static_cast<Eigen::Index>(basis->index_of({1, 0, 0, 1}))] = std::sin(theta);

  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(4, 4);
  const Eigen::MatrixXcd bs = beamsplitter(R).matrix();
  u.block(0, 0, 2, 2) = bs;
  u.block(2, 2, 2, 2) = bs;

  const Eigen::VectorXcd out = lift_to_fock(ModeUnitary(u), *basis) * psi.amplitudes;
  TwoParticleProbs p{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < basis->size(); ++i) {
    const auto& occ = basis->occupations(i);
    const int n_first = occ[0] + occ[2];
    const double w = std::norm(out[static_cast<Eigen::Index>(i)]);
    if (n_first == 2) p.p20 += w;
    else if (n_first == 1) p.p11 += w;
    else p.p02 += w;
  }
  return p;
}

Eigen::MatrixXcd ensemble_average(double R, const std::vector<double>& phases,
                                  const std::vector<double>& weights) {
  // The fluctuating reflection phase enters with the opposite sign of the
  // moment convention <exp(-i phi)>, i.e. the measure is mirrored.
  auto basis = enumerate_basis(2, 2, Statistics::Boson);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(3, 3);
  for (std::size_t k = 0; k < phases.size(); ++k) {
    const Eigen::MatrixXcd lifted = lift_to_fock(beamsplitter(R, -phases[k]), *basis);
    const Eigen::VectorXcd psi = lifted.col(static_cast<Eigen::Index>(basis->index_of({1, 1})));
    rho += weights[k] * (psi * psi.adjoint());
  }
  return rho;
}

}  // namespace

TEST_CASE("partial overlap closed forms at the limits") {
  auto hom = partial_overlap_probs(0.5, 0.0, Statistics::Boson);
  CHECK(hom.p20 == Catch::Approx(0.5));
  CHECK(hom.p11 == Catch::Approx(0.0).margin(1e-15));
  CHECK(hom.p02 == Catch::Approx(0.5));

  auto classical = partial_overlap_probs(0.5, M_PI / 2, Statistics::Boson);
  CHECK(classical.p20 == Catch::Approx(0.25));
  CHECK(classical.p11 == Catch::Approx(0.5));
  CHECK(classical.p02 == Catch::Approx(0.25));

  for (double R : {0.5, 0.2, 0.77}) {
    auto fermi = partial_overlap_probs(R, 0.0, Statistics::Fermion);
    CHECK(fermi.p20 == Catch::Approx(0.0).margin(1e-15));
    CHECK(fermi.p11 == Catch::Approx(1.0));
  }
}

TEST_CASE("partial overlap probabilities sum to one") {
  for (double R = 0.0; R <= 1.0; R += 0.1) {
    for (double theta = 0.0; theta <= M_PI / 2; theta += M_PI / 20) {
      for (auto stats : {Statistics::Boson, Statistics::Fermion}) {
        auto p = partial_overlap_probs(R, theta, stats);
        REQUIRE(p.p20 + p.p11 + p.p02 == Catch::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("theta = pi/2 coincides with labelled-particle combinatorics") {
  for (double R : {0.15, 0.5, 0.8}) {
    auto b = partial_overlap_probs(R, M_PI / 2, Statistics::Boson);
    auto f = partial_overlap_probs(R, M_PI / 2, Statistics::Fermion);
    const double p11_cl =
        transition_probability({1, 1}, {1, 1}, beamsplitter(R), Statistics::Distinguishable);
    const double p20_cl =
        transition_probability({1, 1}, {2, 0}, beamsplitter(R), Statistics::Distinguishable);
    CHECK(b.p11 == Catch::Approx(p11_cl));
    CHECK(f.p11 == Catch::Approx(p11_cl));
    CHECK(b.p20 == Catch::Approx(p20_cl));
    CHECK(f.p20 == Catch::Approx(p20_cl));
  }
}

TEST_CASE("full simulation with label modes reproduces the closed forms") {
  for (double R = 0.05; R < 1.0; R += 0.45) {
    for (double theta = 0.0; theta <= M_PI / 2 + 1e-9; theta += M_PI / 8) {
      for (auto stats : {Statistics::Boson, Statistics::Fermion}) {
        auto sim = simulated_overlap_probs(R, theta, stats);
        auto cf = partial_overlap_probs(R, theta, stats);
        REQUIRE(std::abs(sim.p20 - cf.p20) < 1e-12);
        REQUIRE(std::abs(sim.p11 - cf.p11) < 1e-12);
        REQUIRE(std::abs(sim.p02 - cf.p02) < 1e-12);
      }
    }
  }
}

TEST_CASE("overlap angle recovered from the dip") {
  CHECK(overlap_from_dip(0.0, 0.5) == Catch::Approx(0.0).margin(1e-12));
  CHECK(overlap_from_dip(0.5, 0.5) == Catch::Approx(M_PI / 2));
  CHECK(overlap_from_dip(0.25, 0.5) == Catch::Approx(M_PI / 4));

  // forward-inverse consistency
  for (double R : {0.3, 0.5, 0.62}) {
    for (double theta = 0.0; theta <= M_PI / 2 + 1e-9; theta += M_PI / 14) {
      const double p11 = partial_overlap_probs(R, theta, Statistics::Boson).p11;
      CHECK(std::abs(overlap_from_dip(p11, R) - theta) < 1e-7);
      CHECK(std::abs(partial_overlap_probs(R, overlap_from_dip(p11, R), Statistics::Boson).p11 -
                     p11) < 1e-12);
    }
  }

  CHECK_THROWS_AS(overlap_from_dip(0.9, 0.5), std::out_of_range);
  // below the interaction-free floor (R-T)^2 at unbalanced splitting
  CHECK_THROWS_AS(overlap_from_dip(0.01, 0.3), std::out_of_range);
  CHECK_THROWS_AS(overlap_from_dip(0.5, 0.0), std::domain_error);
}

TEST_CASE("phase distribution moments") {
  CHECK(std::abs(PhaseDistribution::delta(0.7).alpha() - std::polar(1.0, -0.7)) < 1e-15);
  CHECK(std::abs(PhaseDistribution::uniform(2 * M_PI).alpha()) < 1e-15);
  CHECK(PhaseDistribution::uniform(0.0).alpha() == cxd(1.0));

  auto thirds = PhaseDistribution::discrete({0.0, 2 * M_PI / 3, -2 * M_PI / 3}, {1, 1, 1});
  CHECK(std::abs(thirds.alpha()) < 1e-15);
  CHECK(std::abs(thirds.harmonic(2)) < 1e-15);
  CHECK(std::abs(thirds.harmonic(3) - cxd(1.0)) < 1e-14);

  CHECK_THROWS_AS(PhaseDistribution::discrete({0.0}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(PhaseDistribution::discrete({0.0, 1.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("phase averaged state: pure and fully dephased limits") {
  for (double R : {0.5, 0.3, 0.9}) {
    auto pure = phase_averaged_state(R, PhaseDistribution::delta(0.0));
    pure.validate();
    CHECK(pure.purity() == Catch::Approx(1.0).epsilon(1e-12));
  }

  auto dephased = phase_averaged_state(0.5, PhaseDistribution::uniform(2 * M_PI));
  dephased.validate();
  CHECK(std::abs(dephased.matrix(0, 0) - cxd(0.5)) < 1e-15);
  CHECK(std::abs(dephased.matrix(1, 1)) < 1e-15);
  CHECK(std::abs(dephased.matrix(2, 2) - cxd(0.5)) < 1e-15);
  CHECK(dephased.purity() == Catch::Approx(0.5));
}

TEST_CASE("phase averaged state: trace one and positivity for random parameters") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double R = unit(rng);
    std::vector<double> phases{2 * M_PI * unit(rng), 2 * M_PI * unit(rng), 2 * M_PI * unit(rng)};
    std::vector<double> weights{unit(rng) + 0.01, unit(rng) + 0.01, unit(rng) + 0.01};
    auto rho = phase_averaged_state(R, PhaseDistribution::discrete(phases, weights));
    CHECK(std::abs(rho.trace() - 1.0) < 1e-12);  // 4RT + Q^2 = 1
    rho.validate();
  }
}

TEST_CASE("ensemble average reconstructs the closed form") {
  // delta measures: alpha on the unit circle
  for (double R : {0.5, 0.25, 0.8}) {
    for (double phi0 : {0.0, 0.9, -2.1, M_PI}) {
      auto closed = phase_averaged_state(R, PhaseDistribution::delta(phi0));
      auto averaged = ensemble_average(R, {phi0}, {1.0});
      REQUIRE((closed.matrix - averaged).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  // maximal dephasing realized by eighth roots of unity: alpha = 0 exactly
  std::vector<double> phases, weights;
  for (int k = 0; k < 8; ++k) {
    phases.push_back(2 * M_PI * k / 8.0);
    weights.push_back(1.0 / 8.0);
  }
  for (double R : {0.5, 0.37}) {
    auto closed = phase_averaged_state(R, PhaseDistribution::discrete(phases, weights));
    CHECK(std::abs(PhaseDistribution::discrete(phases, weights).alpha()) < 1e-15);
    auto averaged = ensemble_average(R, phases, std::vector<double>(8, 1.0 / 8.0));
    REQUIRE((closed.matrix - averaged).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("populations are independent of the phase distribution") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double R = unit(rng);
    std::vector<double> phases, weights;
    for (int k = 0; k < 5; ++k) {
      phases.push_back(2 * M_PI * unit(rng));
      weights.push_back(unit(rng) + 0.01);
    }
    const double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<double> norm_w = weights;
    for (double& w : norm_w) w /= wsum;
    const Eigen::MatrixXcd averaged = ensemble_average(R, phases, norm_w);
    auto closed = phase_averaged_state(R, PhaseDistribution::discrete(phases, weights));
    for (int d = 0; d < 3; ++d)
      REQUIRE(std::abs(averaged(d, d) - closed.matrix(d, d)) < 1e-12);
  }
}

TEST_CASE("purity grows monotonically with |alpha|") {
  // uniform widths sweep |alpha| continuously between 0 and 1
  for (double R = 0.05; R < 1.0; R += 0.09) {
    std::vector<std::pair<double, double>> points;  // (|alpha|, purity)
    for (double w = 0.0; w <= 2 * M_PI + 1e-12; w += M_PI / 10) {
      auto dist = PhaseDistribution::uniform(w);
      points.emplace_back(std::abs(dist.alpha()), phase_averaged_state(R, dist).purity());
    }
    std::sort(points.begin(), points.end());
    double last = -1.0;
    for (auto& [mag, pur] : points) {
      REQUIRE(pur >= last - 1e-12);
      last = pur;
    }
  }
}
