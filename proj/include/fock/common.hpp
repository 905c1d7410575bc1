#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fock {

using cxd = std::complex<double>;

// Tolerance used for normalization / hermiticity / probability-sum checks.
inline constexpr double kNormTol = 1e-10;

// Hard cap on enumerated basis sizes.  Dense storage only; anything larger
// than this is outside the intended operating range of the library.
inline constexpr std::size_t kDefaultDimensionCap = 1'000'000;

// Thrown when an enumeration or lifted operator would exceed the dimension cap.
class dimension_cap_error : public std::runtime_error {
 public:
  explicit dimension_cap_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a matrix fails a unitarity requirement.
class unitarity_error : public std::runtime_error {
 public:
  explicit unitarity_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when two states (or a state and an operator) disagree on the
// underlying basis.
class basis_mismatch_error : public std::invalid_argument {
 public:
  explicit basis_mismatch_error(const std::string& what) : std::invalid_argument(what) {}
};

// n! as a double.  Exact for n <= 18, correctly rounded above.
inline double factorial(int n) {
  if (n < 0) throw std::domain_error("factorial: negative argument");
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Binomial coefficient clamped at `cap`; returns cap+1 when the true value
// exceeds it, so callers can test against their limit without overflow.
inline std::size_t binomial_capped(int n, int k, std::size_t cap) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  // 128-bit intermediate keeps the running product exact.
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > cap) return cap + 1;
  }
  return static_cast<std::size_t>(r);
}

}  // namespace fock
