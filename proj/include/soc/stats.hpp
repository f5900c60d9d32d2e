#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "soc/errors.hpp"

namespace soc {

// kTauA: ties contribute 0, denominator n(n-1)/2.
// kTauB: same numerator, denominator sqrt((n0 - ties_y)(n0 - ties_z)).
enum class TauVariant { kTauA, kTauB };

namespace detail {

inline void check_tau_input(std::span<const double> y, std::span<const double> z) {
  if (y.size() != z.size()) throw InputError("rank vectors differ in length");
  if (y.size() < 2) throw InputError("kendall tau needs at least two observations");
  auto finite = [](double v) { return !std::isnan(v); };
  if (!std::all_of(y.begin(), y.end(), finite) || !std::all_of(z.begin(), z.end(), finite)) {
    throw InputError("kendall tau input contains NaN");
  }
}

// Pairs tied within runs of equal keys in a sorted range.
template <typename It, typename Eq>
std::int64_t tied_pairs(It first, It last, Eq eq) {
  std::int64_t total = 0;
  while (first != last) {
    It run = first;
    std::int64_t len = 0;
    while (run != last && eq(*first, *run)) {
      ++run;
      ++len;
    }
    total += len * (len - 1) / 2;
    first = run;
  }
  return total;
}

// Sorts v ascending and returns the number of strictly inverted pairs.
inline std::int64_t count_inversions(std::vector<double>& v, std::vector<double>& buf, std::size_t lo,
                                     std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = count_inversions(v, buf, lo, mid) + count_inversions(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

inline double finish_tau(std::int64_t s, std::int64_t n0, std::int64_t ties_y, std::int64_t ties_z,
                         TauVariant variant) {
  if (variant == TauVariant::kTauA) return static_cast<double>(s) / static_cast<double>(n0);
  const double denom = std::sqrt(static_cast<double>(n0 - ties_y)) * std::sqrt(static_cast<double>(n0 - ties_z));
  if (denom == 0.0) throw InputError("tau-b undefined for a constant vector");
  return static_cast<double>(s) / denom;
}

}  // namespace detail

// O(n log n) Kendall tau (Knight's algorithm). The concordance numerator is an
// exact integer, so the result equals kendall_tau_definitional bit for bit.
inline double kendall_tau(std::span<const double> y, std::span<const double> z,
                          TauVariant variant = TauVariant::kTauA) {
  detail::check_tau_input(y, z);
  const std::size_t n = y.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return y[a] < y[b] || (y[a] == y[b] && z[a] < z[b]);
  });
  const auto n0 = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  const std::int64_t ties_y = detail::tied_pairs(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return y[a] == y[b];
  });
  const std::int64_t ties_both = detail::tied_pairs(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return y[a] == y[b] && z[a] == z[b];
  });
  std::vector<double> zs(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) zs[i] = z[perm[i]];
  const std::int64_t swaps = detail::count_inversions(zs, buf, 0, n);
  const std::int64_t ties_z = detail::tied_pairs(zs.begin(), zs.end(), [](double a, double b) { return a == b; });
  const std::int64_t s = n0 - ties_y - ties_z + ties_both - 2 * swaps;
  return detail::finish_tau(s, n0, ties_y, ties_z, variant);
}

// Direct O(n^2) evaluation of sum over i < j of sgn((y_i - y_j)(z_i - z_j)).
inline double kendall_tau_definitional(std::span<const double> y, std::span<const double> z,
                                       TauVariant variant = TauVariant::kTauA) {
  detail::check_tau_input(y, z);
  const std::size_t n = y.size();
  std::int64_t s = 0, ties_y = 0, ties_z = 0;
  auto cmp = [](double a, double b) { return (a > b) - (a < b); };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const int a = cmp(y[i], y[j]);
      const int b = cmp(z[i], z[j]);
      s += a * b;
      ties_y += a == 0;
      ties_z += b == 0;
    }
  }
  const auto n0 = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  return detail::finish_tau(s, n0, ties_y, ties_z, variant);
}

}  // namespace soc
