#pragma once
// The symmetric-square L-value machinery: the central-value approximate
// functional equation driven by a contour kernel V_k, an independent oracle
// route through the completed functional equation, the direct Dirichlet
// series at Re s > 1, and the weighted moment left-hand side.

#include "ssm/modforms.hpp"
#include "ssm/specfun.hpp"

#include <vector>

namespace ssm {

// G(u) in the kernel H(u) = G(u)/u.  The quartic kernel e^{-u^4} is the
// classical choice but explodes off the real axis (|e^{-u^4}| = e^{8 sigma^4}
// at its max on Re u = sigma), which makes certified tail bounds impossible;
// the Gaussian e^{a u^2} gives the same central value (any even G with
// G(0) = 1 does) and certifies cleanly, so it is the default.
enum class KernelKind { gaussian, quartic };

struct AfeKernelSpec {
    ContourSpec contour{Real(1), Real(0), 0, 0}; // height/panels 0 = automatic
    KernelKind kernel = KernelKind::gaussian;
    Real gaussian_a = Real(1) / 16; // G(u) = exp(a u^2)
    long n_cutoff = 0;              // 0 = choose from the tail certificate
    Real tail_estimate = 0;         // filled by sym2_central_afe
};

Complex afe_kernel(const AfeKernelSpec& spec, const Complex& u); // G(u)/u

// gamma-factor ratios R(u) = L_inf(1/2+u)/L_inf(3/2):
//   R(u) = pi^{-3u/2} R_a(u) = (2 pi^{3/2})^{-u} R_b(u)
Complex r_a(int k, const Complex& u);
Complex r_b(int k, const Complex& u);

// V_k(y) = (1/2 pi i) int_(sigma) y^{-u} H(u) R(u) zeta(1+2u)/zeta(1/2+u) du
// evaluated through line_integral; sigma must lie in (1/2, 3].
Real v_kernel(const Real& y, int k, const AfeKernelSpec& spec);

// Fast path for many y: the contour data is evaluated once on a uniform
// grid (trapezoid rule, exponentially accurate for this analytic decaying
// integrand) and each y only pays one incremental complex-power sweep.
struct VkTable {
    int k = 0;
    Real sigma, h;
    std::vector<Complex> coef; // h * g(sigma + i j h), j = 0 halved
    Real eval(const Real& y) const;
};
const VkTable& vk_table(int k, const AfeKernelSpec& spec);

// certified bound on |2 sum_{n > n_cutoff} lambda(n)^2 V_k(n)/sqrt(n)| via
// |lambda(n)| <= d(n), d(n)^2 <= 4n and a large-sigma shift of the contour
Real afe_tail_bound(int k, const AfeKernelSpec& spec, long n_cutoff);
// smallest cutoff whose certified tail is below the policy's absolute
// tolerance (minimized over a grid of shift abscissas)
long afe_cutoff(int k, const AfeKernelSpec& spec, Real& tail_out);

// L(1/2, sym^2 f) = 2 sum_{n <= n_cutoff} lambda(n)^2 V_k(n)/sqrt(n); fills
// spec.n_cutoff (if 0) and spec.tail_estimate; throws precision_failure if
// the certified tail exceeds the policy tolerance.
Real sym2_central_afe(const HeckeEigenform& f, AfeKernelSpec& spec);

// Independent route: smoothed two-sided approximate functional equation for
// the completed Lambda(s) = L_inf(s) L(s, sym^2 f) with
// L_inf(s) = pi^{-3s/2} Gamma((s+1)/2) Gamma((s+k-1)/2) Gamma((s+k)/2),
// sign +1, Dirichlet coefficients A(m) = sum_{a^2 b = m} lambda(b^2), and a
// Gaussian test kernel e^{b u^2} (width b configurable for stability tests).
Real sym2_oracle_at(const HeckeEigenform& f, const Real& s0,
                    const Real& kernel_b = Real(1) / 8);
Real sym2_central_oracle(const HeckeEigenform& f);

// number of Dirichlet coefficients the oracle needs (callers use this to
// size the eigenform's lambda table before calling sym2_oracle_at)
long oracle_cutoff(int k, const Real& s0, const Real& kernel_b = Real(1) / 8);

// L(s, sym^2 f) = zeta(2s) sum lambda(n^2) n^{-s}; direct series with a
// certified truncation bound (written to *tail_out if given) for s >= 2.5,
// delegated to the completed-FE oracle below that (the series boundary is
// s = 1, where absolute-value tail bounds are worthless).
Real sym2_series(const HeckeEigenform& f, const Real& s,
                 Real* tail_out = nullptr);

// sum_f w_f L(1/2, sym^2 f) over the weight-k eigenbasis; the second form
// moves the AFE contour to a caller-chosen abscissa (the value must not
// depend on it, which makes the flag a cheap end-to-end cross-check)
Real moment_lhs(int k);
Real moment_lhs(int k, const Real& afe_sigma);

// lam2[n] = lambda_f(n^2), n <= n_max, by Hecke multiplicativity (Chebyshev
// recurrence in lambda(p) at each prime); needs f.lambda up to n_max
std::vector<Real> lambda_square_table(const HeckeEigenform& f, long n_max);

} // namespace ssm
