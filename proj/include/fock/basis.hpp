#pragma once

#include <algorithm>
#include <memory>
#include <sstream>
#include <vector>

#include "fock/common.hpp"

namespace fock {

enum class Statistics { Boson, Fermion, Distinguishable };

inline const char* to_string(Statistics s) {
  switch (s) {
    case Statistics::Boson: return "boson";
    case Statistics::Fermion: return "fermion";
    case Statistics::Distinguishable: return "distinguishable";
  }
  return "?";
}

// Occupation numbers per mode.  Bosons/fermions are label-free; the
// Distinguishable tag marks states whose particles carry an implicit label
// (the label enters probability formulas, not the occupation list itself).
struct OccupationVector {
  std::vector<int> occupations;
  Statistics statistics = Statistics::Boson;

  OccupationVector() = default;
  OccupationVector(std::vector<int> occ, Statistics stats)
      : occupations(std::move(occ)), statistics(stats) {
    for (int n : occupations) {
      if (n < 0) throw std::invalid_argument("occupation numbers must be non-negative");
      if (statistics == Statistics::Fermion && n > 1)
        throw std::invalid_argument("fermionic occupations must be 0 or 1");
    }
  }

  int modes() const { return static_cast<int>(occupations.size()); }
  int total() const {
    int n = 0;
    for (int v : occupations) n += v;
    return n;
  }
};

inline std::string format_occupations(const std::vector<int>& occ) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < occ.size(); ++i) {
    if (i) os << ',';
    os << occ[i];
  }
  os << ')';
  return os.str();
}

// lexicographic-descending order on occupation tuples
inline bool occ_lex_greater(const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

// Full basis of the fixed-(modes, particles) sector, enumerated in
// lexicographic descending order on occupation tuples so that indices are
// reproducible across modules.  `max_occupation` restricts per-mode counts
// (1 for fermions, 1 for hard-core bosons, unrestricted otherwise).
class FockBasis {
 public:
  FockBasis(int modes, int particles, Statistics statistics,
            int max_occupation = kUnrestricted,
            std::size_t dimension_cap = kDefaultDimensionCap)
      : modes_(modes), particles_(particles), statistics_(statistics),
        max_occupation_(statistics == Statistics::Fermion ? 1 : max_occupation) {
    if (modes < 1) throw std::invalid_argument("FockBasis: need at least one mode");
    if (particles < 0) throw std::invalid_argument("FockBasis: negative particle number");
    if (statistics == Statistics::Fermion && particles > modes)
      throw std::invalid_argument("FockBasis: more fermions than modes");

    const std::size_t count = count_elements(dimension_cap);
    if (count > dimension_cap) {
      throw dimension_cap_error("FockBasis: dimension exceeds cap of " +
                                std::to_string(dimension_cap));
    }
    elements_.reserve(count);
    std::vector<int> occ(modes_, 0);
    emit(occ, 0, particles_);
  }

  static constexpr int kUnrestricted = -1;

  int modes() const { return modes_; }
  int particles() const { return particles_; }
  Statistics statistics() const { return statistics_; }
  int max_occupation() const { return max_occupation_; }
  std::size_t size() const { return elements_.size(); }

  const std::vector<int>& occupations(std::size_t index) const { return elements_[index]; }

  OccupationVector element(std::size_t index) const {
    return OccupationVector(elements_[index], statistics_);
  }

  bool contains(const std::vector<int>& occ) const {
    auto it = std::lower_bound(elements_.begin(), elements_.end(), occ, occ_lex_greater);
    return it != elements_.end() && *it == occ;
  }

  std::size_t index_of(const std::vector<int>& occ) const {
    auto it = std::lower_bound(elements_.begin(), elements_.end(), occ, occ_lex_greater);
    if (it == elements_.end() || *it != occ)
      throw std::out_of_range("FockBasis: occupation vector " + format_occupations(occ) +
                              " not in basis");
    return static_cast<std::size_t>(it - elements_.begin());
  }

  bool compatible(const FockBasis& other) const {
    return modes_ == other.modes_ && particles_ == other.particles_ &&
           statistics_ == other.statistics_ && max_occupation_ == other.max_occupation_;
  }

 private:
  std::size_t count_elements(std::size_t cap) const {
    if (max_occupation_ == kUnrestricted)
      return binomial_capped(particles_ + modes_ - 1, particles_, cap);
    if (max_occupation_ == 1) return binomial_capped(modes_, particles_, cap);
    // general per-mode limit: small DP, clamped at cap
    std::vector<std::size_t> ways(particles_ + 1, 0);
    ways[0] = 1;
    for (int m = 0; m < modes_; ++m) {
      std::vector<std::size_t> next(particles_ + 1, 0);
      for (int n = 0; n <= particles_; ++n) {
        if (!ways[n]) continue;
        for (int k = 0; k <= max_occupation_ && n + k <= particles_; ++k) {
          next[n + k] = std::min(next[n + k] + ways[n], cap + 1);
        }
      }
      ways = std::move(next);
    }
    return ways[particles_];
  }

  // first mode takes the largest admissible count first -> lex descending
  void emit(std::vector<int>& occ, int mode, int remaining) {
    if (mode == modes_ - 1) {
      if (max_occupation_ != kUnrestricted && remaining > max_occupation_) return;
      occ[mode] = remaining;
      elements_.push_back(occ);
      occ[mode] = 0;
      return;
    }
    int hi = remaining;
    if (max_occupation_ != kUnrestricted) hi = std::min(hi, max_occupation_);
    for (int n = hi; n >= 0; --n) {
      occ[mode] = n;
      emit(occ, mode + 1, remaining - n);
    }
    occ[mode] = 0;
  }

  int modes_;
  int particles_;
  Statistics statistics_;
  int max_occupation_;
  std::vector<std::vector<int>> elements_;
};

inline std::shared_ptr<const FockBasis> enumerate_basis(
    int modes, int particles, Statistics statistics,
    int max_occupation = FockBasis::kUnrestricted,
    std::size_t dimension_cap = kDefaultDimensionCap) {
  return std::make_shared<const FockBasis>(modes, particles, statistics, max_occupation,
                                           dimension_cap);
}

}  // namespace fock
