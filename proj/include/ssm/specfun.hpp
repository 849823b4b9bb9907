#pragma once
// Special functions at runtime precision: gamma/zeta family, Dirichlet
// characters and L-functions, Bessel J (series and Mellin-Barnes), Gauss
// hypergeometric, Ferrers functions, and the vertical-line contour
// quadrature that everything analytic goes through.

#include "ssm/complex.hpp"
#include "ssm/precision.hpp"

#include <functional>
#include <vector>

namespace ssm {

// A vertical line Re z = sigma truncated at |Im z| <= height, subdivided into
// `panels` Gauss-Legendre panels per half-line.
//
// wings: 0 = plain truncated vertical line (caller guarantees decay beyond
// `height`); -1/+1 = continue from the truncation points along 45-degree rays
// bent into the left/right half-plane. The rays are extended adaptively until
// the panel contributions fall below the absolute tolerance, which turns an
// algebraically-decaying integrand on the vertical line into a
// super-exponentially decaying one on the bent part (Cauchy: the value is
// unchanged as long as the integrand is analytic and decaying in the swept
// sector, which each caller checks for its own integrand).
struct ContourSpec {
    Real sigma;
    Real height;
    int panels = 8;
    int wings = 0;
};

struct DirichletCharacter {
    long q = 1;
    std::vector<int> values; // values[r], r = 0..q-1, in {-1, 0, 1} (real chars)
    int delta = 0;           // parity: (1 - chi(-1)) / 2
    bool primitive = false;

    int operator()(long n) const {
        long r = n % q;
        if (r < 0) r += q;
        return values[(size_t)r];
    }
};

// The real primitive character chi_D = (D/.) for a fundamental discriminant D
// (built from the Kronecker symbol; includes a primitivity check).
DirichletCharacter quadratic_character(long D);

// --- gamma family -----------------------------------------------------------

// A logarithm of Gamma(z) (principal branch on Re z > 0; for Re z < 1/2 the
// reflection formula is used with a branch-consistent log sin, so exp() of
// the result is always Gamma(z) exactly).
Complex log_gamma(const Complex& z);
Real log_gamma(const Real& x); // x > 0
Complex cgamma(const Complex& z);
// Gamma(x) for real x, any sign (not a non-positive integer).
Real gamma_signed(const Real& x);
Real digamma(const Real& x); // x > 0

// --- zeta family ------------------------------------------------------------

Complex riemann_zeta(const Complex& s);                 // s != 1
Complex hurwitz_zeta(const Complex& s, const Real& a);  // s != 1, a in (0,1]
// F(s,a) = sum_{n>=1} e(na) n^{-s}, continued; a in (0,1).
Complex periodic_zeta(const Complex& s, const Real& a);
Complex dirichlet_l(const Complex& s, const DirichletCharacter& chi);
Complex gauss_sum(const DirichletCharacter& chi);
// Root number eps(chi) = i^{-delta} tau(chi) / sqrt(q).
Complex root_number(const DirichletCharacter& chi);

// --- Bessel / hypergeometric ------------------------------------------------

Real bessel_j(const Real& nu, const Real& x);
// (1/2 pi i) int_(sigma) x^{-s-1} 2^s Gamma((nu+1+s)/2)/Gamma((nu+1-s)/2) ds,
// -1-nu < sigma < 0; evaluated on a bent contour (wings forced left).
Real bessel_j_mb(const Real& nu, const Real& x, const ContourSpec& spec);

Complex hyp2f1(const Complex& a, const Complex& b, const Complex& c,
               const Complex& z); // |z| < 1
// Ferrers function P^mu_nu(x), -1 < x < 1, via the hypergeometric form.
Real legendre_p(const Real& mu, const Real& nu, const Real& x);

// --- contour quadrature -----------------------------------------------------

// (1/2 pi i) * integral of f over the contour described by spec.
// If conj_symmetric is set the caller asserts f(conj z) = conj f(z); only the
// upper half is evaluated then. The `panels` count is doubled until two
// successive estimates agree within the policy's absolute tolerance.
Complex line_integral(const std::function<Complex(const Complex&)>& f,
                      const ContourSpec& spec, bool conj_symmetric = false);

// Single-resolution evaluation (no refinement check); building block for
// line_integral and for callers that do their own validation.
Complex line_integral_once(const std::function<Complex(const Complex&)>& f,
                           const ContourSpec& spec, int panels,
                           bool conj_symmetric);

struct GaussLegendre {
    // nodes/weights on [-1, 1], computed at working precision and cached per
    // (order, precision)
    static const std::vector<std::pair<Real, Real>>& rule(int order);
};

} // namespace ssm
