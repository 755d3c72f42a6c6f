#pragma once

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <string>

#include "ocf/report.hpp"
#include "ocf/weight.hpp"

namespace ocf {

using Decimal50 = boost::multiprecision::cpp_dec_float_50;

inline Weight binomial(unsigned long n, unsigned long k) {
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), n, k);
  return Weight(c);
}

// sum_{j=0}^{i} C(i,j)/C(k,j) == (k+1)/(k+1-i)
inline bool identity_inner(unsigned long i, unsigned long k) {
  Weight lhs;
  for (unsigned long j = 0; j <= i; ++j) lhs += binomial(i, j) / binomial(k, j);
  return lhs == Weight(static_cast<long>(k + 1), static_cast<long>(k + 1 - i));
}

// sum_{i=0}^{k} C(k,i) C(k,k-i) / C(2k,k) / (k+1-i) == (2k+1)/(k+1)^2
inline bool identity_outer(unsigned long k) {
  Weight lhs;
  const Weight central = binomial(2 * k, k);
  for (unsigned long i = 0; i <= k; ++i) {
    lhs += binomial(k, i) * binomial(k, k - i) / central /
           Weight(static_cast<long>(k + 1 - i));
  }
  return lhs == Weight(static_cast<long>(2 * k + 1), static_cast<long>((k + 1) * (k + 1)));
}

// With m = 2^i - 1: sum_{j=0}^{m} C(k,j) C(k,m-j) / C(2k,m) / (2^i - j) <= 2/2^i, for k+2 > 2^i.
inline bool identity_halving(unsigned long i, unsigned long k) {
  const unsigned long p = 1UL << i;
  const unsigned long m = p - 1;
  Weight lhs;
  const Weight total = binomial(2 * k, m);
  for (unsigned long j = 0; j <= m; ++j) {
    lhs += binomial(k, j) * binomial(k, m - j) / total / Weight(static_cast<long>(p - j));
  }
  return lhs <= Weight(2, static_cast<long>(p));
}

// sum_{j=0}^{n} x^j == (x^{n+1}-1)/(x-1) <= x^{n+1}
inline bool identity_geometric(unsigned long x, unsigned long n) {
  mpz_class sum = 0, power = 1;
  for (unsigned long j = 0; j <= n; ++j) {
    sum += power;
    power *= x;
  }
  const bool closed = sum * (x - 1) == power - 1;
  return closed && sum <= power;
}

// |sum_{i=1}^{k} t^{-i} - sqrt(2)(1 - t^{-k})| at 50 digits, t = 1 + sqrt(2)/2.
inline Decimal50 partial_sum_gap(unsigned k) {
  const Decimal50 root2 = boost::multiprecision::sqrt(Decimal50(2));
  const Decimal50 t = 1 + root2 / 2;
  Decimal50 lhs = 0, inv = 1;
  for (unsigned i = 1; i <= k; ++i) {
    inv /= t;
    lhs += inv;
  }
  const Decimal50 rhs = root2 * (1 - inv);
  return boost::multiprecision::abs(lhs - rhs);
}

// Pr[a and b end together] under GDY on the star-pair family, as the binomial sum
// 2 sum_{i=0}^{k} C(k,i)/C(2k,i) (i+1)/(2k+1) 1/(2k+2), checked against 2/(k^2+3k+2).
inline bool identity_star_pair_sum(unsigned long k) {
  Weight lhs;
  for (unsigned long i = 0; i <= k; ++i) {
    lhs += binomial(k, i) / binomial(2 * k, i) * Weight(static_cast<long>(i + 1)) /
           Weight(static_cast<long>((2 * k + 1) * (2 * k + 2)));
  }
  lhs.mul_pow2(1);
  return lhs == Weight(2, static_cast<long>(k * k + 3 * k + 2));
}

inline SuiteReport identity_suite() {
  SuiteReport r;
  r.name = "identities";
  r.claim = "binomial and geometric identities hold exactly; partial-sum identity to 1e-40";
  auto sweep = [&r](const std::string& name, auto&& body) {
    std::size_t cases = 0;
    std::string first_bad;
    body([&](bool ok, const std::string& where) {
      ++cases;
      if (!ok && first_bad.empty()) first_bad = where;
    });
    r.add(name, first_bad.empty(),
          std::to_string(cases) + " cases" + (first_bad.empty() ? "" : ", first failure " + first_bad));
  };
  sweep("inner sum, 0<=i<=k<=30", [](auto&& check) {
    for (unsigned long k = 0; k <= 30; ++k) {
      for (unsigned long i = 0; i <= k; ++i) {
        check(identity_inner(i, k), "i=" + std::to_string(i) + " k=" + std::to_string(k));
      }
    }
  });
  sweep("outer sum, 0<=k<=30", [](auto&& check) {
    for (unsigned long k = 0; k <= 30; ++k) check(identity_outer(k), "k=" + std::to_string(k));
  });
  sweep("halving bound, k+2>2^i, k<=30", [](auto&& check) {
    for (unsigned long k = 0; k <= 30; ++k) {
      for (unsigned long i = 0; (1UL << i) < k + 2; ++i) {
        check(identity_halving(i, k), "i=" + std::to_string(i) + " k=" + std::to_string(k));
      }
    }
  });
  sweep("geometric sum, x in 2..10, n<=30", [](auto&& check) {
    for (unsigned long x = 2; x <= 10; ++x) {
      for (unsigned long n = 0; n <= 30; ++n) {
        check(identity_geometric(x, n), "x=" + std::to_string(x) + " n=" + std::to_string(n));
      }
    }
  });
  sweep("partial sum of t^-i, k<=50, 50 digits", [](auto&& check) {
    const Decimal50 tol("1e-40");
    for (unsigned k = 0; k <= 50; ++k) check(partial_sum_gap(k) <= tol, "k=" + std::to_string(k));
  });
  sweep("star-pair binomial sum, k<=30", [](auto&& check) {
    for (unsigned long k = 1; k <= 30; ++k) check(identity_star_pair_sum(k), "k=" + std::to_string(k));
  });
  return r;
}

}  // namespace ocf
