#pragma once
// The closed-form side of the first-moment asymptotic: the main term m1, the
// two secondary terms m_minus4 / m_minus3 (with the simplified m_minus3_prime
// and its sign function S(k)), the contour integral I(u,y) behind them, and
// the Dummigan critical-value closed form used as an exact cross-check.

#include "ssm/modforms.hpp"
#include "ssm/specfun.hpp"

#include <string>

namespace ssm {

// psi(k - 1/2) + 2 gamma + psi(3/4)/2 - log(2 pi^{3/2})
Real m1(int k);
// the same constant computed as the residue 2 d/du [u^2 H(u) (2 pi^{3/2})^{-u}
// R_b(u) zeta(1+2u)] at u = 0, by central differencing (cross-check route)
Real m1_residue_route(int k, const Real& h = Real(1e-8));

// i^{-k} sqrt(pi/2) L(1/2, chi_-4) Gamma((k-1/2)/2) / Gamma((k+1/2)/2)
Real m_minus4(int k);
// the same value through the pre-residue contour integral over the completed
// Lambda(1/2+u, chi_-4) (cross-check route)
Real m_minus4_integral(int k);

// sqrt(2 pi) i^{-k} L(1/2, chi_-3) (2/sqrt 3)^{k-1/2}
//   F((k-1/2)/2, (k-1/2)/2; 1/2; -1/3) Gamma((k-1/2)/2) / Gamma((k+1/2)/2);
// the hypergeometric series at z = -1/3 loses ~0.4k digits to cancellation,
// so the working precision is escalated automatically.
Real m_minus3(int k);

// simplified form 3^{1/4} sqrt(2 pi) L(1/2, chi_-3) Gamma(k-1/2)/Gamma(k) S(k)
Real m_minus3_prime(int k);
int s_of_k(int k); // S(k) = -1, 0, 1 for k = 2, 4, 0 mod 6

// I(u,y) = (1/2 pi i) int_(3) G((k-1/2-u-z)/2)/G((k+1/2+u+z)/2)
//          Gamma(z) cos(pi z/2) y^{-z} dz, for 1/2 < Re u < k - 4.
// Closed form with three branches (y < 2 / y = 2 / y > 2; the y = 2 branch
// is taken on exact match only).
Complex i_closed(const Complex& u, const Real& y, int k);
// direct quadrature of the definition (oracle); the vertical line decays only
// algebraically, so the contour is bent 45 degrees — left for y < 2, right
// for y > 2 (the wing integrand decays like (y/2)^{|Re z|} resp.
// (2/y)^{Re z}); y = 2 is rejected.
Complex i_numeric(const Complex& u, const Real& y, int k, const ContourSpec& spec);

// w_f L(r, sym^2 f) = -(2 pi)^{2r}/4 Gamma(k-r)/Gamma(k+r-1) beta for odd r,
// 3 <= r <= k-1, with beta built from p_coeff, zeta(1-2r) and L(1-r, chi).
Real dummigan_beta(int k, int r);

// m1 + m_minus4 + m_minus3 (the dropped O(k^{-B}) term is what the residual
// of the full report measures)
Real moment_rhs(int k);

struct MomentReport {
    int k = 0;
    Real lhs, m1, m_minus4, m_minus3, residual;
    double runtime_seconds = 0;
    std::string fingerprint;
};
MomentReport moment_report(int k);

std::string policy_fingerprint();

} // namespace ssm
