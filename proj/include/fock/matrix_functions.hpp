#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <future>
#include <vector>

#include "fock/common.hpp"

namespace fock {

// Permanent by direct summation over all permutations.  This is the oracle
// realization of the definition; factorial cost limits it to n <= 10.
inline cxd permanent_naive(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("permanent_naive: matrix not square");
  const int n = static_cast<int>(m.rows());
  if (n > 10) throw std::length_error("permanent_naive: n > 10");
  if (n == 0) return 1.0;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  cxd sum = 0.0;
  do {
    cxd prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= m(i, perm[i]);
    sum += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum;
}

namespace detail {

struct KahanC {
  cxd sum{0.0, 0.0};
  cxd comp{0.0, 0.0};
  void add(cxd v) {
    const cxd y = v - comp;
    const cxd t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

// Ryser partial sum over the Gray-code subset walk for k in [first, last).
// Subset at step k is k ^ (k >> 1); consecutive steps toggle one column, so
// the row sums are updated in O(n).
inline cxd ryser_range(const Eigen::MatrixXcd& m, std::uint64_t first, std::uint64_t last,
                       bool compensated) {
  const int n = static_cast<int>(m.rows());
  std::uint64_t gray = first ^ (first >> 1);
  std::vector<cxd> rowsum(n, cxd(0.0, 0.0));
  int parity = 0;
  for (int j = 0; j < n; ++j) {
    if (gray >> j & 1u) {
      parity ^= 1;
      for (int i = 0; i < n; ++i) rowsum[i] += m(i, j);
    }
  }
  KahanC acc;
  cxd plain = 0.0;
  for (std::uint64_t k = first;;) {
    cxd prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= rowsum[i];
    if (parity) prod = -prod;
    if (compensated)
      acc.add(prod);
    else
      plain += prod;
    if (++k >= last) break;
    const int j = static_cast<int>(__builtin_ctzll(k));
    const double sign = (gray >> j & 1u) ? -1.0 : 1.0;
    gray ^= 1ull << j;
    parity ^= 1;
    for (int i = 0; i < n; ++i) rowsum[i] += sign * m(i, j);
  }
  return compensated ? acc.sum : plain;
}

}  // namespace detail

// Ryser's inclusion-exclusion permanent, O(2^n * n).
//
// The subset walk is split into a fixed number of contiguous ranges chosen
// from n alone; partial sums are combined in range order.  The result is
// therefore bitwise identical no matter how many threads execute the ranges.
// Compensated (Kahan) accumulation kicks in at n >= 20 where the 2^n-term
// sum starts to lose digits.
inline cxd permanent_ryser(const Eigen::MatrixXcd& m, int threads = 1) {
  if (m.rows() != m.cols()) throw std::invalid_argument("permanent_ryser: matrix not square");
  const int n = static_cast<int>(m.rows());
  if (n > 30) throw std::length_error("permanent_ryser: n > 30");
  if (n == 0) return 1.0;
  const std::uint64_t total = (1ull << n) - 1ull;  // nonempty subsets 1..2^n-1
  const bool compensated = n >= 20;
  const int ranges = n >= 16 ? 64 : 1;

  std::vector<cxd> partial(ranges);
  auto run = [&](int r) {
    const std::uint64_t first = 1 + total * r / ranges;
    const std::uint64_t last = 1 + total * (r + 1) / ranges;
    partial[r] = first < last ? detail::ryser_range(m, first, last, compensated) : cxd(0.0);
  };
  if (threads > 1 && ranges > 1) {
    std::vector<std::future<void>> jobs;
    std::atomic<int> next{0};
    const int workers = std::min(threads, ranges);
    for (int w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&] {
        for (int r = next.fetch_add(1); r < ranges; r = next.fetch_add(1)) run(r);
      }));
    }
    for (auto& j : jobs) j.get();
  } else {
    for (int r = 0; r < ranges; ++r) run(r);
  }

  detail::KahanC acc;
  cxd plain = 0.0;
  for (int r = 0; r < ranges; ++r) {
    if (compensated)
      acc.add(partial[r]);
    else
      plain += partial[r];
  }
  cxd result = compensated ? acc.sum : plain;
  if (n % 2) result = -result;  // (-1)^n prefactor
  return result;
}

// Determinant via Gaussian elimination with partial pivoting.
inline cxd determinant(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix not square");
  const int n = static_cast<int>(m.rows());
  if (n == 0) return 1.0;
  Eigen::MatrixXcd a = m;
  cxd det = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::abs(a(col, col));
    for (int r = col + 1; r < n; ++r) {
      const double v = std::abs(a(r, col));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (pivot != col) {
      a.row(pivot).swap(a.row(col));
      det = -det;
    }
    det *= a(col, col);
    for (int r = col + 1; r < n; ++r) {
      const cxd f = a(r, col) / a(col, col);
      a.row(r).tail(n - col) -= f * a.row(col).tail(n - col);
    }
  }
  return det;
}

}  // namespace fock
