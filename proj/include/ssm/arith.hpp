#pragma once
// Exact integer/rational arithmetic: Kronecker symbols, Kloosterman sums,
// the quadratic-congruence counting functions N(c) and M(c) together with
// their Dirichlet-convolution identities, Bernoulli numbers, and the exact
// power-series coefficients p_{k,r}(t,m).

#include "ssm/precision.hpp"

#include <gmpxx.h>

#include <vector>

namespace ssm {

// Kronecker symbol (D/n), standard conventions at 2, -1 and 0.
int kronecker(long D, long n);

// Exact B_k, convention B_1 = -1/2; results cached.
const mpq_class& bernoulli(unsigned k);

// S(m,n;c) = sum over x mod c, gcd(x,c)=1, of e((m x + n xbar)/c).
// Direct enumeration with modular inverses; returned as a real (the
// imaginary parts cancel in pairs x <-> -x).
Real kloosterman(long m, long n, long c);

// Shares the inverse table and the cosine table over many (m,n) pairs with
// the same modulus; exact integer bucketing, one cosine contraction per pair.
class KloostermanBatch {
  public:
    explicit KloostermanBatch(long c);
    Real operator()(long m, long n) const;
    long modulus() const { return c_; }

  private:
    long c_;
    std::vector<long> inv_;  // xbar for gcd(x,c)=1, else -1
    std::vector<Real> cosv_; // cos(2 pi j / c), j = 0..c-1
};

// N(c) = #{x mod c, gcd(x,c)=1 : x^2 = -1 (c)},
// M(c) = #{x mod c, gcd(x,c)=1 : x^2 - x + 1 = 0 (c)}.
// Dispatch: direct enumeration for c <= 10^6, multiplicative closed form
// beyond; both routes exposed for cross-testing.
long count_N(long c);
long count_M(long c);
long count_N_enum(long c);
long count_M_enum(long c);
long count_N_closed(long c);
long count_M_closed(long c);

// representative of x + xbar mod c in [1, c]
long r_of(long x, long c);

struct ConvolutionCheck {
    bool ok = true;
    long first_failure = 0;
};

// Verifies sum_{a^2 b = n} count(b) = sum_{d | n} chi_D(d) for all n <= n_max
// (kind 'N' pairs with chi_{-4}, kind 'M' with chi_{-3}); exact integers.
ConvolutionCheck convolution_identity_check(char kind, long n_max);

// Coefficient of x^{k-r-1} in (1 - t x + m x^2)^{-r}, exact.
mpq_class p_coeff(long k, long r, long t, long m);

// smallest-prime-factor sieve (shared helper)
std::vector<int32_t> spf_sieve(long n);

} // namespace ssm
