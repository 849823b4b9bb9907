// Unit tests for the special-function layer. Wherever a value is not an
// elementary closed form it is checked against an independent route computed
// here (product recursions, defining series, functional equations), not
// against the implementation under test.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "ssm/arith.hpp"
#include "ssm/complex.hpp"
#include "ssm/precision.hpp"
#include "ssm/specfun.hpp"

#include <doctest.h>

#include <random>

using namespace ssm;
using boost::multiprecision::abs;
using boost::multiprecision::exp;
using boost::multiprecision::log;
using boost::multiprecision::pow;
using boost::multiprecision::sqrt;

static Real tol(double e) { return pow(Real(10), Real(e)); }

TEST_CASE("log_gamma elementary values") {
    set_policy({50, 1e-40, 1e-40});
    CHECK(abs(log_gamma(Complex(1))) < tol(-45));
    CHECK(abs(log_gamma(Complex(Real(1) / 2)).re - log(const_pi()) / 2) <
          tol(-45));
    CHECK(abs(log_gamma(Complex(Real(1) / 2)).im) < tol(-45));
    // recursion oracle at z = 30.25: log Gamma(z) = log Gamma(z + N) - sum
    Real z = Real("30.25");
    int N = 40;
    Real direct = log_gamma(z);
    Real shifted = log_gamma(z + N);
    for (int j = 0; j < N; ++j) shifted -= log(z + j);
    CHECK(abs(direct - shifted) < tol(-30));
}

TEST_CASE("log_gamma complex reflection consistency") {
    set_policy({50, 1e-40, 1e-40});
    // Gamma(z) Gamma(1-z) = pi / sin(pi z), checked through exp of the logs
    Complex z(Real("-2.3"), Real("1.7"));
    Complex lhs = exp(log_gamma(z) + log_gamma(Complex(1) - z));
    Complex rhs = Complex(const_pi()) / sin(Complex(const_pi()) * z);
    CHECK(abs(lhs - rhs) < abs(rhs) * tol(-42));
    // duplication: Gamma(2z) = 2^{2z-1}/sqrt(pi) Gamma(z) Gamma(z+1/2)
    Complex w(Real("3.7"), Real("-2.2"));
    Complex dup = log_gamma(Complex(2) * w) -
                  (log_gamma(w) + log_gamma(w + Complex(Real(1) / 2)));
    Complex expect =
        (Complex(2) * w - Complex(1)) * Complex(const_ln2()) -
        Complex(log(const_pi()) / 2);
    CHECK(abs(exp(dup) - exp(expect)) < tol(-40));
}

TEST_CASE("gamma_signed negative arguments") {
    set_policy({50, 1e-40, 1e-40});
    // Gamma(-1/2) = -2 sqrt(pi)
    CHECK(abs(gamma_signed(Real(-1) / 2) + 2 * sqrt(const_pi())) < tol(-42));
    // Gamma(-3/2) = 4 sqrt(pi) / 3
    CHECK(abs(gamma_signed(Real(-3) / 2) - 4 * sqrt(const_pi()) / 3) <
          tol(-42));
    CHECK_THROWS_AS(gamma_signed(Real(-3)), pole_error);
}

TEST_CASE("digamma") {
    set_policy({50, 1e-40, 1e-40});
    CHECK(abs(digamma(Real(1)) + const_euler()) < tol(-45));
    // series oracle: psi(x) = -gamma + sum_{n>=0} (1/(n+1) - 1/(n+x)),
    // accelerated by pairing with the integral tail: use 200k terms plus the
    // Euler-Maclaurin tail of the summand 1/(n+1)-1/(n+x) ~ (x-1)/n^2
    Real x = Real(3) / 4;
    {
        ScopedDigits scope(60);
        Real s = -const_euler();
        long N = 200000;
        for (long n = 0; n < N; ++n)
            s += Real(1) / (n + 1) - 1 / (n + x);
        // tail sum_{n>=N} (x-1)(-1)/(n(n+x))... bound by asymptotics:
        // sum (1/(n+1) - 1/(n+x)) = (x-1) sum 1/((n+1)(n+x)) + ...
        // use the exact telescoped remainder via digamma asymptotic instead:
        // remainder = psi(N+x) - psi(N+1)  (from the recursion), expand to
        // second order: log((N+x)/(N+1)) - (1/2)(1/(N+x)-1/(N+1)) - ...
        Real a = N + x, b = N + 1;
        Real rem = log(a / b) - (1 / (2 * a) - 1 / (2 * b));
        Real B2 = Real(1) / 6;
        rem += B2 / 2 * (1 / (a * a) - 1 / (b * b));
        s += rem;
        CHECK(abs(digamma(x) - s) < tol(-14)); // limited by the manual tail
    }
    // asymptotic oracle at large argument
    Real big = Real(1000) - Real(1) / 2;
    CHECK(abs(digamma(big) - (log(big) - 1 / (2 * big))) < tol(-6));
    // reflection closed form: psi(3/4) = -gamma - 3 ln 2 + pi/2
    CHECK(abs(digamma(Real(3) / 4) -
              (-const_euler() - 3 * const_ln2() + const_pi() / 2)) < tol(-40));
}

TEST_CASE("riemann zeta basic and functional equation") {
    set_policy({50, 1e-40, 1e-40});
    Real pi = const_pi();
    CHECK(abs(riemann_zeta(Complex(2)).re - pi * pi / 6) < tol(-44));
    CHECK(abs(riemann_zeta(Complex(0)).re + Real(1) / 2) < tol(-44));
    CHECK(abs(riemann_zeta(Complex(-1)).re + Real(1) / 12) < tol(-40));
    CHECK_THROWS_AS(riemann_zeta(Complex(1)), pole_error);

    auto fe_gap = [&](const Complex& s) {
        Complex lhs = riemann_zeta(s);
        Complex rhs = Complex(2) * pow(2 * pi, s - Complex(1)) *
                      sin(Complex(pi) * s / Complex(2)) *
                      cgamma(Complex(1) - s) * riemann_zeta(Complex(1) - s);
        return (abs(lhs - rhs) / abs(rhs)).convert_to<double>();
    };
    CHECK(fe_gap(Complex(Real("3.5"), Real(10))) < 1e-25);

    std::mt19937 rng(20240901);
    std::uniform_real_distribution<double> re(-3.0, 4.0), im(-12.0, 12.0);
    for (int i = 0; i < 50; ++i) {
        Complex s(Real(re(rng)), Real(im(rng)));
        if (abs(s - Complex(1)) < Real(1) / 4) continue;
        CHECK(fe_gap(s) < 1e-20);
    }
}

TEST_CASE("hurwitz zeta") {
    set_policy({50, 1e-40, 1e-40});
    Real pi = const_pi();
    for (double s : {2.0, 3.0, -0.5})
        CHECK(abs(hurwitz_zeta(Complex(s), Real(1)) - riemann_zeta(Complex(s))) <
              tol(-44));
    // zeta(2, 1/2) = pi^2/2: independent series 4 * sum 1/(2n+1)^2 =
    // 4 * (zeta(2) - zeta(2)/4) = 3 zeta(2) = pi^2/2
    CHECK(abs(hurwitz_zeta(Complex(2), Real(1) / 2).re - pi * pi / 2) <
          tol(-42));
    // decomposition oracle for L(1/2, chi_-4) (consistency checked in the
    // dirichlet_l test below); here: Hurwitz at negative Re s against the
    // direct EM evaluation reflected by hand through periodic zeta route
    Complex s(Real("-3.7"), Real("2.1"));
    // series-free consistency: recursion zeta(s,a) = zeta(s, a') with split
    // zeta(s,1/4) = 4^s sum over n = 1/4 mod 1... use the multiplication
    // theorem: sum_{j=0..3} zeta(s, j/4 + 1/4 offset)
    // zeta(s, 1/4)+zeta(s,2/4)+zeta(s,3/4)+zeta(s,1) = 4^s zeta(s)
    Complex lhs = hurwitz_zeta(s, Real(1) / 4) + hurwitz_zeta(s, Real(2) / 4) +
                  hurwitz_zeta(s, Real(3) / 4) + hurwitz_zeta(s, Real(1));
    Complex rhs = pow(Real(4), s) * riemann_zeta(s);
    CHECK((abs(lhs - rhs) / abs(rhs)).convert_to<double>() < 1e-38);
    CHECK_THROWS_AS(hurwitz_zeta(Complex(1), Real(1) / 2), pole_error);
    CHECK_THROWS_AS(hurwitz_zeta(Complex(2), Real(2)), std::domain_error);
}

// Abel-summation oracle for F(s,a) = sum e(na) n^{-s} at integer s >= 2:
// iterated summation by parts against the closed geometric tails.
static Complex periodic_series_oracle(long s, const Real& a, long terms) {
    // direct series with Richardson-style tail: sum_{n<=N} + E(N), where the
    // alternating-phase tail is estimated by grouping full periods; for
    // denominator q small this is exact up to O(N^{-s-1}) per period block.
    // Simplest rigorous route here: average the partial sums over one full
    // period of e(na) (Cesaro over q consecutive N), which kills the
    // oscillatory O(N^{-s}) term and leaves O(N^{-s-1}).
    // Iterating the averaging twice gives O(N^{-s-2}).
    long q = 0; // denominator of a if rational with small denom
    for (long d = 1; d <= 100; ++d) {
        Real v = a * d;
        if (boost::multiprecision::floor(v) == v) {
            q = d;
            break;
        }
    }
    REQUIRE(q > 0);
    std::vector<Complex> partial;
    Complex acc(0);
    for (long n = 1; n <= terms + 2 * q; ++n) {
        acc += unit_e(a * n) / pow(Real(n), Complex((double)s));
        if (n > terms) partial.push_back(acc);
    }
    // two rounds of period-averaging
    std::vector<Complex> avg1;
    for (size_t i = 0; i + q <= partial.size(); ++i) {
        Complex m(0);
        for (long j = 0; j < q; ++j) m += partial[i + j];
        avg1.push_back(m / Complex(q));
    }
    Complex m(0);
    for (long j = 0; j < q && j < (long)avg1.size(); ++j) m += avg1[j];
    return m / Complex(std::min<long>(q, avg1.size()));
}

TEST_CASE("periodic zeta") {
    set_policy({50, 1e-40, 1e-40});
    Real pi = const_pi();
    // a = 1/2, s = 2: sum (-1)^n / n^2 = -pi^2/12
    CHECK(abs(periodic_zeta(Complex(2), Real(1) / 2).re + pi * pi / 12) <
          tol(-40));
    CHECK(abs(periodic_zeta(Complex(2), Real(1) / 2).im) < tol(-40));
    // a = 1/3, s = 3: independent partial-sum oracle (period averaged)
    Complex direct = periodic_series_oracle(3, Real(1) / 3, 200000);
    Complex val = periodic_zeta(Complex(3), Real(1) / 3);
    CHECK(abs(val - direct) < tol(-18)); // oracle accuracy O(N^{-4}) ~ 1e-21
    // s = 1 closed form: -log(1 - e(a))
    Complex v1 = periodic_zeta(Complex(1), Real(1) / 3);
    Complex cf = -log(Complex(1) - unit_e(Real(1) / 3));
    CHECK(abs(v1 - cf) < tol(-42));

    // FE_periodic against hurwitz_zeta on a random grid
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> re(-2.5, 3.5), im(-8.0, 8.0),
        ad(0.05, 0.95);
    for (int i = 0; i < 25; ++i) {
        Complex s(Real(re(rng)), Real(im(rng)));
        Real a(ad(rng));
        Complex lhs = periodic_zeta(s, a);
        Complex z = Complex(1) - s;
        Complex pref = cgamma(z) * pow(2 * pi, s - Complex(1));
        Complex ep = exp(Complex(Real(0), pi / 2) * z);
        Complex em = exp(Complex(Real(0), -pi / 2) * z);
        Complex rhs = pref * (ep * hurwitz_zeta(z, a) +
                              em * hurwitz_zeta(z, Real(1) - a));
        CHECK((abs(lhs - rhs) / abs(rhs)).convert_to<double>() < 1e-20);
    }
}

TEST_CASE("dirichlet characters, gauss sums, L-values") {
    set_policy({50, 1e-40, 1e-40});
    auto chi4 = quadratic_character(-4);
    auto chi3 = quadratic_character(-3);
    auto chi5 = quadratic_character(5);
    CHECK(chi4.q == 4);
    CHECK(chi4.delta == 1);
    CHECK(chi3.delta == 1);
    CHECK(chi5.delta == 0);
    CHECK(chi4.primitive);
    CHECK(chi3.primitive);
    CHECK(chi5.primitive);
    CHECK(chi4(3) == -1);
    CHECK(chi3(2) == -1);

    // tau(chi_-4) = 2i; eps = 1 for both odd characters
    Complex tau4 = gauss_sum(chi4);
    CHECK(abs(tau4 - Complex(Real(0), Real(2))) < tol(-45));
    CHECK(abs(root_number(chi4) - Complex(1)) < tol(-42));
    CHECK(abs(root_number(chi3) - Complex(1)) < tol(-42));
    for (auto* chi : {&chi4, &chi3, &chi5})
        CHECK(abs(abs(gauss_sum(*chi)) - sqrt(Real(chi->q))) < tol(-42));

    // L(1, chi_-4) = pi/4 via the alternating series oracle is classical;
    // assert the closed form
    CHECK(abs(dirichlet_l(Complex(1), chi4).re - const_pi() / 4) < tol(-25));
    // central values quoted to 6 digits
    CHECK(abs(dirichlet_l(Complex(Real(1) / 2), chi4).re - Real("0.667691")) <
          Real("1e-5"));
    CHECK(abs(dirichlet_l(Complex(Real(1) / 2), chi3).re - Real("0.480868")) <
          Real("1e-5"));

    // completed functional equation at random s
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> re(-2.0, 3.0), im(-6.0, 6.0);
    for (auto* chi : {&chi4, &chi3}) {
        Real q((long)chi->q);
        auto completed = [&](const Complex& s) {
            Complex ss = s + Complex((long)chi->delta);
            return pow(q / const_pi(), ss / Complex(2)) * cgamma(ss / Complex(2)) *
                   dirichlet_l(s, *chi);
        };
        for (int i = 0; i < 20; ++i) {
            Complex s(Real(re(rng)), Real(im(rng)));
            Complex lhs = completed(s);
            Complex rhs = root_number(*chi) * completed(Complex(1) - s);
            CHECK((abs(lhs - rhs) / abs(rhs)).convert_to<double>() < 1e-20);
        }
    }

    // imprimitive modulus must be rejected: chi mod 8 induced by chi_-4 is
    // not fundamental; emulate by the non-fundamental discriminant -16
    DirichletCharacter imp;
    imp.q = 8;
    imp.values = {0, 1, 0, -1, 0, -1, 0, 1}; // induced by (-4/.)
    imp.delta = 1;
    imp.primitive = false;
    CHECK_THROWS_AS(dirichlet_l(Complex(2), imp), std::domain_error);
}

TEST_CASE("bessel_j series") {
    set_policy({50, 1e-30, 1e-30});
    Real pi = const_pi();
    // J_{1/2}(x) = sqrt(2/(pi x)) sin x
    CHECK(abs(bessel_j(Real(1) / 2, pi) - sqrt(2 / (pi * pi)) * sin(pi)) <
          tol(-40));
    Real x(1);
    CHECK(abs(bessel_j(Real(1) / 2, x) -
              sqrt(2 / (pi * x)) * sin(x)) < tol(-42));
    // smallness bound J_39(4pi) <= (2pi)^39/Gamma(40)
    Real b = pow(2 * pi, 39) / exp(log_gamma(Real(40)));
    CHECK(abs(bessel_j(Real(39), 4 * pi)) <= b);
}

TEST_CASE("bessel series vs Mellin-Barnes") {
    set_policy({40, 1e-16, 1e-16});
    Real pi = const_pi();
    ContourSpec cs{Real(-0.5), Real(0), 8, 0};
    for (double nu : {11.0, 23.0, 39.0}) {
        for (Real x : {2 * pi, 4 * pi, 4 * pi / 3}) {
            Real a = bessel_j(Real(nu), x);
            Real b = bessel_j_mb(Real(nu), x, cs);
            CHECK(abs(a - b) < tol(-12));
        }
    }
    // half-integer closed form
    CHECK(abs(bessel_j_mb(Real(1) / 2, Real(1), cs) -
              sqrt(2 / pi) * sin(Real(1))) < tol(-12));
    CHECK_THROWS_AS(bessel_j_mb(Real(11), Real(1), ContourSpec{Real(1), Real(0), 8, 0}),
                    contour_error);
}

TEST_CASE("hyp2f1") {
    set_policy({50, 1e-40, 1e-40});
    CHECK(abs(hyp2f1(Complex(Real("1.3")), Complex(2), Complex(Real("0.7")),
                     Complex(0)) -
              Complex(1)) < tol(-45));
    // F(1,1;2;z) = -log(1-z)/z
    Real z = Real(1) / 4;
    CHECK(abs(hyp2f1(Complex(1), Complex(1), Complex(2), Complex(z)).re +
              boost::multiprecision::log1p(-z) / z) < tol(-40));
    // binomial reduction F(a,b;b;z) = (1-z)^{-a}
    Real a("2.5");
    CHECK(abs(hyp2f1(Complex(a), Complex(7), Complex(7), Complex(Real(-1) / 3)).re -
              pow(Real(4) / 3, -a)) < tol(-40));
    // linear transformation on a random admissible grid
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> par(0.3, 4.0), zz(-0.6, 0.45);
    for (int i = 0; i < 12; ++i) {
        Complex A(Real(par(rng))), B(Real(par(rng))), C(Real(par(rng) + 4.0));
        Complex Z(Real(zz(rng)));
        Complex lhs = hyp2f1(A, B, C, Z);
        Complex rhs = pow(Complex(1) - Z, -A) *
                      hyp2f1(A, C - B, C, Z / (Z - Complex(1)));
        CHECK((abs(lhs - rhs) / abs(rhs)).convert_to<double>() < 1e-20);
    }
    CHECK_THROWS_AS(hyp2f1(Complex(1), Complex(1), Complex(-2), Complex(Real(1) / 2)),
                    pole_error);
}

TEST_CASE("legendre_p") {
    set_policy({50, 1e-40, 1e-40});
    CHECK(abs(legendre_p(Real(0), Real(1), Real(1) / 2) - Real(1) / 2) <
          tol(-40));
    // P_2(x) = (3x^2-1)/2 at x=1/2 -> -1/8
    CHECK(abs(legendre_p(Real(0), Real(2), Real(1) / 2) + Real(1) / 8) <
          tol(-40));
}

TEST_CASE("line_integral examples") {
    set_policy({50, 1e-30, 1e-30});
    Real pi = const_pi();
    // Cahen-Mellin: (1/2pi i) int Gamma(z) y^{-z} dz = e^{-y}
    {
        Real y(2);
        ContourSpec cs{Real(3), Real(60), 8, 0};
        auto f = [&](const Complex& z) {
            return exp(log_gamma(z) - z * Complex(log(y)));
        };
        Complex v = line_integral(f, cs, true);
        CHECK(abs(v.re - exp(Real(-2))) < tol(-20));
    }
    // Gamma(z) cos(pi z/2) x^{-z} at sigma = 1/2 -> cos(x); algebraic decay
    // on the line, bent-contour wings required
    {
        Real x(1);
        ContourSpec cs{Real(1) / 2, Real(30), 8, -1};
        auto f = [&](const Complex& z) {
            return exp(log_gamma(z)) * cos(Complex(pi / 2) * z) *
                   pow(x, -z);
        };
        Complex v = line_integral(f, cs, true);
        CHECK(abs(v.re - cos(Real(1))) < tol(-15));
    }
    // Mellin-Barnes Bessel integrand as a plain line_integral call
    {
        Real x = 4 * pi, nu(11);
        ContourSpec cs{Real(-0.5), Real(60), 8, -1};
        auto f = [&](const Complex& s) {
            return exp(log_gamma((Complex(nu + 1) + s) / Complex(2)) -
                       log_gamma((Complex(nu + 1) - s) / Complex(2)) +
                       s * Complex(const_ln2()) - (s + Complex(1)) * Complex(log(x)));
        };
        Complex v = line_integral(f, cs, true);
        CHECK(abs(v.re - bessel_j(nu, x)) < tol(-12));
    }
}

TEST_CASE("Barnes ratio invariant") {
    set_policy({40, 1e-30, 1e-30});
    long bad = 0;
    for (long k = 100; k <= 10000; k += 2) {
        Real r = exp(log_gamma(Real(2 * k - 1) / 4) - log_gamma(Real(2 * k + 1) / 4));
        if (!(abs(r * sqrt(Real(k) / 2) - 1) <= Real(1) / k)) ++bad;
    }
    CHECK(bad == 0);
}
