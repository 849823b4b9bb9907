// Asymptotic side of the first moment: the main term m1, the two secondary
// terms and their independent evaluation routes, the contour integral I(u,y),
// and the rational critical-value closed form.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "ssm/asymptotics.hpp"

#include "ssm/arith.hpp"
#include "ssm/gmpconv.hpp"
#include "ssm/lvalues.hpp"

#include <doctest.h>

using namespace ssm;
using boost::multiprecision::abs;
using boost::multiprecision::cos;
using boost::multiprecision::exp;
using boost::multiprecision::log;
using boost::multiprecision::pow;
using boost::multiprecision::sqrt;

TEST_CASE("m1: the k-independent constant, two ways") {
    // m1(k) - psi(k - 1/2) should equal 2 gamma + psi(3/4)/2 - log(2 pi^{3/2});
    // the closed form of psi(3/4) = -gamma - 3 log 2 + pi/2 gives a second,
    // digamma-free route to the same constant.
    Real got = m1(20) - digamma(Real(39) / 2);
    Real g = const_euler();
    Real psi34 = -g - 3 * const_ln2() + const_pi() / 2;
    Real want = 2 * g + psi34 / 2 - const_ln2() - Real(3) / 2 * log(const_pi());
    CHECK(abs(got - want) < 1e-25);
}

TEST_CASE("m1 agrees with the residue route") {
    for (int k : {12, 40})
        CHECK(abs(m1(k) - m1_residue_route(k)) < 1e-10);
    CHECK_THROWS_AS(m1(13), std::invalid_argument);
}

TEST_CASE("m1 grows like log k: m1(4k) - m1(k) -> log 4") {
    CHECK(abs(m1(400) - m1(100) - 2 * const_ln2()) < Real(1) / 100);
}

TEST_CASE("m_minus4: sign law, decay, and the integral route") {
    for (int k : {12, 14, 16, 18}) {
        Real v = m_minus4(k);
        CHECK((k % 4 == 0 ? v > 0 : v < 0));
    }
    CHECK(abs(m_minus4(40)) < abs(m_minus4(20))); // ~ k^{-1/2} decay
    for (int k : {12, 26})
        CHECK(abs(m_minus4(k) - m_minus4_integral(k)) < 1e-22);
}

TEST_CASE("m_minus3 approaches its simplified form at rate O(1/k)") {
    for (int k : {20, 24, 26, 36}) {
        Real a = m_minus3(k), b = m_minus3_prime(k);
        CHECK(abs(a - b) < Real(5) / k);
        if (s_of_k(k) != 0) CHECK((s_of_k(k) > 0 ? a > 0 : a < 0));
    }
    // for k = 4 mod 6 the leading term vanishes and m_minus3 = O(k^{-3/2})
    for (int k : {16, 28, 40, 52}) {
        CHECK(m_minus3_prime(k) == 0);
        CHECK(abs(m_minus3(k)) * pow(Real(k), Real(3) / 2) < 5);
    }
}

TEST_CASE("the sign function: cos(k pi/3 - 7 pi/12) + cos(2k pi/3 - 11 pi/12)") {
    // the raw cosine combination from the stationary-phase evaluation should
    // collapse to sqrt(3/2) S(k) for even k
    Real pi = const_pi();
    for (int k = 12; k <= 22; k += 2) {
        Real c = cos(k * pi / 3 - 7 * pi / 12) + cos(2 * k * pi / 3 - 11 * pi / 12);
        CHECK(abs(c + sqrt(Real(3) / 2) * s_of_k(k)) < 1e-25);
    }
}

TEST_CASE("hypergeometric-to-Legendre bridge behind m_minus3_prime") {
    // (2/sqrt 3)^{k-1/2} F(a, a; 1/2; -1/3), a = (k-1/2)/2, equals
    // Gamma((k+1/2)/2) Gamma(1 - (k-1/2)/2) / (2 sqrt pi)
    //   { P_{k-3/2}(1/2) + P_{k-3/2}(-1/2) }
    for (int k : {16, 24, 36}) {
        unsigned digits = std::max(policy().working_digits, (unsigned)(0.4 * k + 30));
        ScopedDigits scope(digits);
        Real a = Real(2 * k - 1) / 4;
        Real lhs = exp((Real(2 * k - 1) / 2) * (const_ln2() - log(Real(3)) / 2)) *
                   hyp2f1(Complex(a), Complex(a), Complex(Real(1) / 2),
                          Complex(Real(-1) / 3))
                       .re;
        Real nu = Real(2 * k - 3) / 2;
        Real rhs = exp(log_gamma(Real(2 * k + 1) / 4)) *
                   gamma_signed(1 - Real(2 * k - 1) / 4) / (2 * sqrt(const_pi())) *
                   (legendre_p(Real(0), nu, Real(1) / 2) +
                    legendre_p(Real(0), nu, Real(-1) / 2));
        CHECK(abs(lhs - rhs) < 1e-12 * (1 + abs(lhs)));
    }
}

TEST_CASE("I(u,y): closed form vs direct contour quadrature") {
    ContourSpec cs{Real(3), Real(0), 0, 0};
    Complex us[] = {Complex(Real(3) / 4), Complex(Real(1), Real(1))};
    for (const Complex& u : us)
        for (double y : {0.5, 3.0}) {
            Complex a = i_closed(u, Real(y), 20);
            Complex b = i_numeric(u, Real(y), 20, cs);
            CHECK(abs(a - b) < 1e-14);
        }
}

TEST_CASE("I(u,y) at y = 2: exact branch and continuity") {
    // hand-assembled value at u = 1, k = 20:
    //   i^20 2^2 cos(3 pi/4) / sqrt(pi) Gamma(1) Gamma(18.5)/Gamma(20.5)
    Real want = 4 * cos(3 * const_pi() / 4) / sqrt(const_pi()) *
                exp(log_gamma(Real(37) / 2) - log_gamma(Real(41) / 2));
    Complex got = i_closed(Complex(Real(1)), Real(2), 20);
    CHECK(abs(got.re - want) < 1e-25);
    CHECK(abs(got.im) < 1e-25);

    // the y = 2 branch must equal the y -> 2+ limit of the outer branch:
    // F(a, b; k; 1) collapses by Gauss summation to
    // Gamma(k) Gamma(u) / (Gamma((k+1/2+u)/2) Gamma((k-1/2+u)/2))
    for (double ud : {1.0, 2.5}) {
        Real u(ud), km = Real(39) / 2;
        Real cosf = cos(const_pi() / 2 * (Real(1) / 2 + u));
        Real lim = 2 * cosf * pow(Real(2), -(km - u)) *
                   exp(log_gamma(km - u) + log_gamma(u) -
                       log_gamma((km + 1 + u) / 2) - log_gamma((km + u) / 2));
        CHECK(abs(i_closed(Complex(u), Real(2), 20).re - lim) < 1e-25);
    }

    // quadrature cannot run on y = 2 (no decaying wing direction)
    ContourSpec cs{Real(3), Real(0), 0, 0};
    CHECK_THROWS_AS(i_numeric(Complex(Real(1)), Real(2), 20, cs),
                    std::invalid_argument);
    // strip validation
    CHECK_THROWS_AS(i_closed(Complex(Real(1) / 4), Real(1), 20), std::domain_error);
    CHECK_THROWS_AS(i_closed(Complex(Real(17)), Real(1), 20), std::domain_error);
}

TEST_CASE("I(u,y) against the oscillatory Bessel representation") {
    // I(u,y) = 2^{1/2+u} int_0^inf J_{k-1}(x) cos(xy/2) x^{-1/2-u} dx;
    // u = 5/2, y = 1, k = 20; truncation at X = 300 costs at most
    // sqrt(2/pi) X^{-3.5}/3.5 ~ 1e-9, quadrature in half-period panels.
    Real u = Real(5) / 2, y = 1;
    int k = 20;
    const auto& gl = GaussLegendre::rule(24);
    Real acc = 0, X = 300, w = 2;
    for (Real a = 0; a < X; a += w) {
        Real piece = 0;
        for (const auto& [t, wt] : gl) {
            Real x = a + w * (t + 1) / 2;
            piece += wt * bessel_j(Real(k - 1), x) * cos(x * y / 2) *
                     pow(x, -Real(1) / 2 - u);
        }
        acc += piece * w / 2;
    }
    acc *= pow(Real(2), Real(1) / 2 + u);
    CHECK(abs(acc - i_closed(Complex(u), y, k).re) < 1e-8);
}

TEST_CASE("critical values: rational closed form vs the Dirichlet series") {
    // anchor the combinatorial coefficient and the zeta value first
    CHECK(p_coeff(12, 3, 0, 1) == mpq_class(15));
    CHECK(abs(riemann_zeta(Complex(Real(-5))).re + Real(1) / 252) < 1e-30);

    const auto& f = eigenbasis(12, 100001)[0];
    for (int r : {3, 11}) { // 11 = k - 1 exercises the extra zeta term
        Real closed = dummigan_beta(12, r);
        Real series = f.w * sym2_series(f, Real(r));
        CHECK(abs(closed / series - 1) < 1e-10);
    }
    CHECK_THROWS_AS(dummigan_beta(12, 4), std::domain_error);
    CHECK_THROWS_AS(dummigan_beta(12, 13), std::domain_error);
}

TEST_CASE("moment_rhs decomposes exactly and the k = 12 residual is small") {
    Real rhs = moment_rhs(12);
    CHECK(abs(rhs - (m1(12) + m_minus4(12) + m_minus3(12))) < 1e-40);

    MomentReport rep = moment_report(12);
    CHECK(rep.k == 12);
    CHECK(rep.lhs > 0);
    CHECK(abs(rep.residual - (rep.lhs - rhs)) < 1e-40);
    CHECK(abs(rep.residual) < 1e-4); // observed ~4e-6 at k = 12
    CHECK(rep.runtime_seconds > 0);
    CHECK(rep.fingerprint == policy_fingerprint());
    CHECK(!rep.fingerprint.empty());
}

TEST_CASE("for large k the secondary terms are negligible next to m1") {
    CHECK(abs(moment_rhs(100) - m1(100)) < 3 / sqrt(Real(100)));
}
