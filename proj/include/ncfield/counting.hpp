#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ncfield/error.hpp"

namespace ncfield {

using BigCount = boost::multiprecision::cpp_int;

namespace detail {

inline void require(bool cond, const char* what) {
  if (!cond) throw Error(ErrorCode::InvalidInput, what);
}

// n/d with the remainder asserted zero.
inline BigCount exact_div(const BigCount& n, const BigCount& d) {
  BigCount q, r;
  boost::multiprecision::divide_qr(n, d, q, r);
  if (r != 0) throw Error(ErrorCode::InvalidInput, "inexact division in closed form");
  return q;
}

}  // namespace detail

/// C(n, k) by multiplicative accumulation, reducing numerator and
/// denominator by their gcd at every step.
inline BigCount binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigCount num = 1, den = 1;
  for (long i = 1; i <= k; ++i) {
    num *= n - k + i;
    den *= i;
    BigCount g = boost::multiprecision::gcd(num, den);
    num /= g;
    den /= g;
  }
  if (den != 1) throw Error(ErrorCode::InvalidInput, "binomial: non-integral result");
  return num;
}

/// Number of noncrossing trees of order n: C(3n-3, n-1) / (2n-1).
inline BigCount count_A(long n) {
  detail::require(n >= 1, "count_A: n must be >= 1");
  return detail::exact_div(binomial(3 * n - 3, n - 1), 2 * n - 1);
}

/// Trees of order n whose vertex 1 has degree one: 2 C(3n-4, n-2) / (3n-4).
inline BigCount count_A1(long n) {
  detail::require(n >= 1, "count_A1: n must be >= 1");
  if (n == 1) return 0;
  return detail::exact_div(2 * binomial(3 * n - 4, n - 2), 3 * n - 4);
}

struct RecurrenceTable {
  std::vector<BigCount> A;   // A[n], n >= 1
  std::vector<BigCount> A1;  // A1[n], n >= 1
};

/// Both sequences up to n from the coupled recurrences
///   A1(n) = sum_{j=2..n} A(j-1) A(n+1-j),   A(n) = sum_{j=2..n} A1(n+2-j) A(j-1).
inline RecurrenceTable count_recurrence_table(long n) {
  detail::require(n >= 1, "recurrence: n must be >= 1");
  RecurrenceTable t;
  t.A.assign(n + 1, 0);
  t.A1.assign(n + 1, 0);
  t.A[1] = 1;
  t.A1[1] = 0;
  for (long m = 2; m <= n; ++m) {
    BigCount a1 = 0;
    for (long j = 2; j <= m; ++j) a1 += t.A[j - 1] * t.A[m + 1 - j];
    t.A1[m] = a1;
    BigCount a = 0;
    for (long j = 2; j <= m; ++j) a += t.A1[m + 2 - j] * t.A[j - 1];
    t.A[m] = a;
  }
  return t;
}

inline BigCount count_A_rec(long n) { return count_recurrence_table(n).A[n]; }
inline BigCount count_A1_rec(long n) { return count_recurrence_table(n).A1[n]; }

/// Trees of order n up to rotation.
inline BigCount count_Ar(long n) {
  detail::require(n >= 1, "count_Ar: n must be >= 1");
  BigCount total = count_A(n);
  if (n % 2 == 0) total += BigCount(n / 2) * count_A1(n / 2 + 1);
  return detail::exact_div(total, n);
}

/// Ordered ternary trees with m internal vertices.
inline BigCount count_ternary(long m) {
  detail::require(m >= 0, "count_ternary: m must be >= 0");
  return count_A(m + 1);
}

/// Generic strata of monic centred fields of degree k+1.
inline BigCount strata_count(long k) {
  detail::require(k >= 0, "strata_count: k must be >= 0");
  return count_A(k + 2);
}

inline std::string to_decimal(const BigCount& c) { return c.str(); }

}  // namespace ncfield
