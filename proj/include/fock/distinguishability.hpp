#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "fock/basis.hpp"
#include "fock/common.hpp"
#include "fock/state.hpp"

namespace fock {

// Mixing angle between the reference internal state and an orthogonal one:
// theta = 0 is perfectly indistinguishable, theta = pi/2 fully distinguishable.
struct OverlapParam {
  double theta;
  explicit OverlapParam(double t) : theta(t) {
    if (!(t >= 0.0 && t <= M_PI / 2.0 + 1e-15))
      throw std::domain_error("OverlapParam: theta outside [0, pi/2]");
  }
};

// Shot-to-shot distribution of the beamsplitter reflection phase.  The only
// quantities that enter the averaged state are the circular moments
// <exp(-i k phi)>.
class PhaseDistribution {
 public:
  static PhaseDistribution delta(double phi0) {
    PhaseDistribution d;
    d.samples_ = {phi0};
    d.weights_ = {1.0};
    return d;
  }

  // uniform over [-width/2, width/2]; width = 2*pi is full dephasing
  static PhaseDistribution uniform(double width) {
    if (width < 0.0) throw std::domain_error("PhaseDistribution: negative width");
    PhaseDistribution d;
    d.uniform_width_ = width;
    return d;
  }

  static PhaseDistribution discrete(std::vector<double> phases, std::vector<double> weights) {
    if (phases.empty() || phases.size() != weights.size())
      throw std::invalid_argument("PhaseDistribution: phases/weights size mismatch");
    double total = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw std::invalid_argument("PhaseDistribution: negative weight");
      total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("PhaseDistribution: weights sum to zero");
    for (double& w : weights) w /= total;
    PhaseDistribution d;
    d.samples_ = std::move(phases);
    d.weights_ = std::move(weights);
    return d;
  }

  // <exp(-i k phi)>
  cxd harmonic(int k) const {
    if (k == 0) return 1.0;
    if (uniform_width_ >= 0.0) {
      const double x = k * uniform_width_ / 2.0;
      return x == 0.0 ? 1.0 : std::sin(x) / x;
    }
    cxd acc = 0.0;
    for (std::size_t i = 0; i < samples_.size(); ++i)
      acc += weights_[i] * std::polar(1.0, -k * samples_[i]);
    return acc;
  }

  cxd alpha() const { return harmonic(1); }

  bool is_discrete() const { return uniform_width_ < 0.0; }
  const std::vector<double>& sample_phases() const { return samples_; }
  const std::vector<double>& sample_weights() const { return weights_; }

 private:
  PhaseDistribution() = default;
  std::vector<double> samples_;
  std::vector<double> weights_;
  double uniform_width_ = -1.0;
};

struct TwoParticleProbs {
  double p20;
  double p11;
  double p02;
};

// Two-particle beamsplitter probabilities for particles with internal
// overlap cos(theta).
inline TwoParticleProbs partial_overlap_probs(double reflectivity, double theta,
                                              Statistics statistics) {
  if (!(reflectivity >= 0.0 && reflectivity <= 1.0))
    throw std::domain_error("partial_overlap_probs: reflectivity outside [0, 1]");
  OverlapParam overlap(theta);
  const double R = reflectivity;
  const double T = 1.0 - R;
  const double s2 = std::sin(theta) * std::sin(theta);
  const double c2 = std::cos(theta) * std::cos(theta);
  switch (statistics) {
    case Statistics::Boson:
      return {R * T * (1.0 + c2), (R - T) * (R - T) + 2.0 * R * T * s2, R * T * (1.0 + c2)};
    case Statistics::Fermion:
      return {R * T * s2, R + T - 2.0 * R * T * s2, R * T * s2};
    default:
      throw std::invalid_argument("partial_overlap_probs: bosons or fermions only");
  }
}

// Inverts the bosonic coincidence probability for the overlap angle.
inline double overlap_from_dip(double p11, double reflectivity) {
  if (!(reflectivity >= 0.0 && reflectivity <= 1.0))
    throw std::domain_error("overlap_from_dip: reflectivity outside [0, 1]");
  const double R = reflectivity;
  const double T = 1.0 - R;
  if (2.0 * R * T < 1e-14)
    throw std::domain_error("overlap_from_dip: dip carries no overlap information at R = 0 or 1");
  double s2 = (p11 - (R - T) * (R - T)) / (2.0 * R * T);
  if (s2 < -1e-12 || s2 > 1.0 + 1e-12)
    throw std::out_of_range("overlap_from_dip: coincidence probability unreachable for this R");
  s2 = std::clamp(s2, 0.0, 1.0);
  return std::asin(std::sqrt(s2));
}

// Mixed two-particle state after a beamsplitter with fluctuating reflection
// phase, in the basis {|2,0>, |1,1>, |0,2>}:
//
//   [ 2RT                 i sqrt(2RT) Q a     2RT a^2          ]
//   [ -i sqrt(2RT) Q a*   Q^2                 -i sqrt(2RT) Q a ]
//   [ 2RT (a*)^2          i sqrt(2RT) Q a*    2RT              ]
//
// with Q = T - R and a the first circular moment of the distribution.  The
// populations on the diagonal carry no phase dependence at all.
inline DensityMatrix phase_averaged_state(double reflectivity, const PhaseDistribution& dist) {
  if (!(reflectivity >= 0.0 && reflectivity <= 1.0))
    throw std::domain_error("phase_averaged_state: reflectivity outside [0, 1]");
  const double R = reflectivity;
  const double T = 1.0 - R;
  const double Q = T - R;
  const double s = std::sqrt(2.0 * R * T);
  const cxd a = dist.alpha();
  const cxd i(0.0, 1.0);

  DensityMatrix rho;
  rho.matrix.resize(3, 3);
  rho.matrix << 2.0 * R * T, i * s * Q * a, 2.0 * R * T * a * a,
      -i * s * Q * std::conj(a), Q * Q, -i * s * Q * a,
      2.0 * R * T * std::conj(a) * std::conj(a), i * s * Q * std::conj(a), 2.0 * R * T;
  rho.labels = {{2, 0}, {1, 1}, {0, 2}};
  rho.statistics = Statistics::Boson;
  return rho;
}

}  // namespace fock
