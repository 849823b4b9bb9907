#pragma once
// Exact q-expansions of level-1 modular forms, the Victor Miller basis,
// Hecke eigenforms via the exact T_2 matrix, and Petersson weights obtained
// by using the Petersson formula as a linear system.

#include "ssm/precision.hpp"

#include <gmpxx.h>

#include <vector>

namespace ssm {

struct QExpansion {
    int k = 0;                // weight
    std::vector<mpz_class> a; // a[0..N]; cusp forms have a[0] = 0
    long length() const { return (long)a.size() - 1; }
};

// exact truncated product of integer power series (Kronecker substitution:
// one big GMP multiply instead of N^2 coefficient products)
std::vector<mpz_class> series_mul(const std::vector<mpz_class>& A,
                                  const std::vector<mpz_class>& B, long N);

QExpansion qexp_mul(const QExpansion& f, const QExpansion& g);
QExpansion eisenstein(int k, long N); // k in {4, 6}
QExpansion delta_form(long N);        // (E4^3 - E6^2)/1728

long dim_cusp_forms(int k); // level 1, even k

// echelonized basis g_1..g_d of S_k, g_i = q^i + O(q^{d+1}); the basis is
// integral, so each row is an exact integer q-expansion of length N
std::vector<QExpansion> miller_basis(int k, long N);

struct HeckeEigenform {
    int k = 0;
    std::vector<Real> lambda; // lambda[n] = a(n)/n^{(k-1)/2}; lambda[1] = 1
    Real w = 0;               // Petersson weight, filled by solve_weights
};

// T_2-diagonalized eigenforms (T_3 fallback on an eigenvalue collision),
// sorted by descending eigenvalue for a deterministic order; weights unset.
std::vector<HeckeEigenform> hecke_eigenforms(int k, long N);

// exact integer trace of T_2 on S_k (test hook)
mpz_class hecke_t2_trace(int k);

// delta_{m,n} + 2 pi i^{-k} sum_{c <= c_max} S(m,n;c)/c J_{k-1}(4 pi
// sqrt(mn)/c); throws if the certified Bessel tail beyond c_max exceeds tol.
Real petersson_rhs(int k, long m, long n, long c_max, const Real& tol);
// smallest c_max whose tail certificate is below tol
long petersson_c_max(int k, long m, long n, const Real& tol);
Real petersson_rhs_auto(int k, long m, long n); // tol from the active policy

// fills w_f by solving sum_f w_f lambda_f(n) = petersson_rhs(k,1,n), n=1..d
void solve_weights(int k, std::vector<HeckeEigenform>& forms);

// eigenforms with weights, memoized per (k, minimum length)
const std::vector<HeckeEigenform>& eigenbasis(int k, long N);

} // namespace ssm
