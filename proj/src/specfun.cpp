#include "ssm/specfun.hpp"

#include "ssm/arith.hpp"
#include "ssm/gmpconv.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ssm {

using boost::multiprecision::abs;
using boost::multiprecision::ceil;
using boost::multiprecision::cos;
using boost::multiprecision::exp;
using boost::multiprecision::floor;
using boost::multiprecision::log;
using boost::multiprecision::pow;
using boost::multiprecision::sin;
using boost::multiprecision::sqrt;

static Real eps_at(unsigned digits) { return pow(Real(10), -(int)digits); }

static bool is_integer(const Real& x) { return floor(x) == x; }

static bool is_integer(const Complex& z) {
    return z.im == 0 && is_integer(z.re);
}

// ---------------------------------------------------------------------------
// Dirichlet characters

DirichletCharacter quadratic_character(long D) {
    DirichletCharacter chi;
    chi.q = std::labs(D);
    chi.values.resize((size_t)chi.q);
    for (long r = 0; r < chi.q; ++r) chi.values[(size_t)r] = kronecker(D, r);
    chi.delta = (1 - chi(-1)) / 2;

    // primitivity: chi is primitive mod q iff for every proper divisor d of q
    // there is n = 1 (mod d), gcd(n, q) = 1, with chi(n) != 1
    chi.primitive = chi.q > 1;
    for (long d = 1; d < chi.q && chi.primitive; ++d) {
        if (chi.q % d) continue;
        bool witness = false;
        for (long n = 1; n <= chi.q; n += d) {
            if (std::gcd(n, chi.q) != 1) continue;
            if (chi(n) != 1) {
                witness = true;
                break;
            }
        }
        if (!witness) chi.primitive = false;
    }
    return chi;
}

// ---------------------------------------------------------------------------
// gamma family

// sin(pi x) for real x with exact argument reduction
static Real sin_pi(const Real& x) {
    Real n = floor(x + Real(1) / 2); // nearest integer (ties toward +inf, fine)
    Real f = x - n;                  // exact in binary, |f| <= 1/2
    Real s = sin(const_pi() * f);
    // subtracting an integer flips the sign of sin(pi x) per unit
    bool flip = (static_cast<long long>(n.convert_to<long long>()) % 2) != 0;
    return flip ? -s : s;
}

// branch-consistent log sin(pi z): exp() of the result is sin(pi z) exactly,
// and the value is continuous in the closed upper half plane
static Complex log_sin_pi(const Complex& z) {
    if (z.im < 0) return conj(log_sin_pi(conj(z)));
    // sin(pi z) = e^{-i pi z + i pi/2} (1 - e^{2 pi i z}) / 2
    Real pi = const_pi();
    Complex e2 = exp(Complex(-2 * pi * z.im, 2 * pi * z.re)); // e^{2 pi i z}
    Complex rest = log1p(-e2);
    return Complex(pi * z.im - const_ln2(), pi / 2 - pi * z.re) + rest;
}

static Complex stirling_log_gamma(const Complex& w) {
    // asymptotic series, |w| large enough that it reaches working precision
    unsigned P = policy().working_digits;
    Real eps = eps_at(P + 5);
    Complex lw = log(w);
    Complex res = (w - Complex(Real(1) / 2)) * lw - w;
    res += Complex((log(2 * const_pi())) / 2);
    Complex w2 = w * w;
    Complex invp = Complex(1) / w; // w^{-(2m-1)}
    for (unsigned m = 1; m < 500; ++m) {
        Real coeff = to_real(bernoulli(2 * m)) / ((2 * m) * (2 * m - 1));
        Complex term = Complex(coeff) * invp;
        res += term;
        if (abs(term) < eps * abs(res)) return res;
        invp /= w2;
    }
    throw precision_failure("log_gamma: asymptotic series stalled");
}

Real log_gamma(const Real& x) {
    if (!(x > 0)) throw pole_error("log_gamma: need x > 0 on the real route");
    unsigned P = policy().working_digits;
    Real z0 = Real(0.38) * P + 10;
    Real w = lift_precision(x);
    Real shift(0);
    while (w < z0) {
        shift += log(w);
        w += 1;
    }
    return stirling_log_gamma(Complex(w)).re - shift;
}

Complex log_gamma(const Complex& z) {
    if (z.im == 0) {
        if (z.re > 0) return Complex(log_gamma(z.re));
        if (is_integer(z.re)) throw pole_error("log_gamma: pole");
    }
    if (z.re < Real(1) / 2) {
        // reflection; exp() of the result is Gamma(z) for any log-sin branch
        Complex lg = Complex(log(const_pi())) - log_sin_pi(z) -
                     log_gamma(Complex(1) - z);
        return lg;
    }
    unsigned P = policy().working_digits;
    Real z0 = Real(0.38) * P + 10;
    Complex w = lift_precision(z);
    Complex shift(0);
    while (abs(w) < z0) {
        shift += log(w);
        w += Complex(1);
    }
    return stirling_log_gamma(w) - shift;
}

Complex cgamma(const Complex& z) { return exp(log_gamma(z)); }

Real gamma_signed(const Real& x) {
    if (x > 0) return exp(log_gamma(x));
    if (is_integer(x)) throw pole_error("gamma_signed: pole");
    // Gamma(x) = pi / (sin(pi x) Gamma(1 - x))
    return const_pi() / (sin_pi(x) * exp(log_gamma(1 - x)));
}

Real digamma(const Real& x) {
    if (!(x > 0)) throw pole_error("digamma: need x > 0");
    unsigned P = policy().working_digits;
    Real eps = eps_at(P + 5);
    Real z0 = Real(0.38) * P + 10;
    Real w = lift_precision(x);
    Real shift(0);
    while (w < z0) {
        shift += 1 / w;
        w += 1;
    }
    Real res = log(w) - 1 / (2 * w);
    Real w2 = w * w;
    Real invp = 1 / w2;
    for (unsigned m = 1; m < 500; ++m) {
        Real term = to_real(bernoulli(2 * m)) / (2 * m) * invp;
        res -= term;
        if (abs(term) < eps * abs(res)) return res - shift;
        invp /= w2;
    }
    throw precision_failure("digamma: asymptotic series stalled");
}

// ---------------------------------------------------------------------------
// zeta family

static Complex hurwitz_zeta_em(const Complex& s_in, const Real& a_in) {
    unsigned P = policy().working_digits;
    Complex s = lift_precision(s_in);
    Real a = lift_precision(a_in);
    Real eps = eps_at(P + 3);
    double t = std::abs(s.im.convert_to<double>());
    long N = (long)std::ceil(0.35 * P + 0.53 * t) + 5;

    Complex sum(0);
    for (long n = 0; n < N; ++n) sum += pow(n + a, -s);
    Real w = N + a;
    Complex ms = -s;
    sum += pow(w, Complex(1) - s) / (s - Complex(1));
    sum += pow(w, ms) / Complex(2);

    // Euler-Maclaurin correction sum
    Complex poch = s;                 // (s)_{2m-1}
    Complex wp = pow(w, ms) / Complex(w); // w^{-s-1}
    Real w2 = w * w;
    mpz_class fact = 2; // (2m)!
    for (unsigned m = 1; m < 600; ++m) {
        Complex term =
            Complex(to_real(bernoulli(2 * m)) / to_real(mpz_class(fact))) *
            poch * wp;
        sum += term;
        if (abs(term) < eps * abs(sum)) return sum;
        poch *= (s + Complex((long)(2 * m - 1))) * (s + Complex((long)(2 * m)));
        wp /= Complex(w2);
        fact *= (2 * m + 1) * (2 * m + 2);
    }
    throw precision_failure("hurwitz_zeta: EM tail stalled");
}

Complex riemann_zeta(const Complex& s) {
    if (s.re == 1 && s.im == 0) throw pole_error("riemann_zeta: pole at s=1");
    if (s.re < -3) {
        // reflect into the EM-friendly half plane (cancellation in the EM
        // partial sums grows with |Re s| on the left)
        Complex one_minus = Complex(1) - s;
        Real pi = const_pi();
        Complex val = Complex(2) * pow(2 * pi, s - Complex(1));
        // sin(pi s / 2) through exact reduction when s is real
        Complex sn = s.im == 0 ? Complex(sin_pi(s.re / 2))
                               : sin(Complex(pi) * s / Complex(2));
        if (sn == Complex(0)) return Complex(0); // trivial zeros, exactly
        return val * sn * cgamma(one_minus) * riemann_zeta(one_minus);
    }
    return hurwitz_zeta_em(s, Real(1));
}

Complex hurwitz_zeta(const Complex& s, const Real& a) {
    if (!(a > 0) || a > 1)
        throw std::domain_error("hurwitz_zeta: need a in (0,1]");
    if (s.re == 1 && s.im == 0) throw pole_error("hurwitz_zeta: pole at s=1");
    if (s.re >= -3 || a == 1) {
        if (a == 1) return riemann_zeta(s);
        return hurwitz_zeta_em(s, a);
    }
    // Hurwitz functional equation via the periodic zeta-function
    Complex z = Complex(1) - s;
    Real pi = const_pi();
    Complex pref = cgamma(z) / pow(2 * pi, z);
    Complex e_plus = exp(Complex(0, pi / 2) * z);   // e(z/4)
    Complex e_minus = exp(Complex(0, -pi / 2) * z); // e(-z/4)
    return pref *
           (e_minus * periodic_zeta(z, a) + e_plus * periodic_zeta(z, 1 - a));
}

Complex periodic_zeta(const Complex& s, const Real& a) {
    if (!(a > 0) || !(a < 1))
        throw std::domain_error("periodic_zeta: need a in (0,1)");
    unsigned P = policy().working_digits;
    Real eps = eps_at(P + 3);

    // F(s,a) = Li_s(e^mu), mu = 2 pi i a', a' = a or a-1 with |a'| <= 1/2
    Real ap = a <= Real(1) / 2 ? a : a - 1;
    Real pi = const_pi();
    Complex mu(Real(0), 2 * pi * ap);
    Complex minus_mu(Real(0), -2 * pi * ap);

    if (is_integer(s) && s.re >= 1) {
        long m = s.re.convert_to<long>();
        if (m == 1) return -log1p(-exp(mu));
        // limit form at positive integer order
        Complex muj(1); // mu^j / j!
        Complex sum(0);
        mpq_class harm(0);
        for (long j = 1; j < m; ++j) harm += mpq_class(1, j);
        Real window(0); // |term_j| + |term_{j-1}| (zeta's trivial zeros make
                        // single terms vanish identically, so one small term
                        // is not evidence of convergence)
        for (long j = 0; j < 4 * (long)P + 60; ++j) {
            if (j == m - 1) {
                sum += muj * (Complex(to_real(harm)) - log(minus_mu));
                window = abs(sum);
            } else {
                Complex term = muj * riemann_zeta(Complex((double)(m - j)));
                sum += term;
                Real at = abs(term);
                if (j > m && at + window < eps * abs(sum)) return sum;
                window = at;
            }
            muj *= mu / Complex((long)(j + 1));
        }
        throw precision_failure("periodic_zeta: series stalled");
    }

    Complex sum = cgamma(Complex(1) - s) * pow(minus_mu, s - Complex(1));
    Complex muj(1);
    Real window(0);
    for (long j = 0; j < 4 * (long)P + 60; ++j) {
        Complex term = muj * riemann_zeta(s - Complex(j));
        sum += term;
        Real at = abs(term);
        if (j > 2 && at + window < eps * abs(sum)) return sum;
        window = at;
        muj *= mu / Complex(j + 1);
    }
    throw precision_failure("periodic_zeta: series stalled");
}

Complex dirichlet_l(const Complex& s, const DirichletCharacter& chi) {
    if (!chi.primitive || chi.q == 1)
        throw std::domain_error("dirichlet_l: character must be primitive, q > 1");
    Real q(chi.q);
    if (s.re == 1 && s.im == 0) {
        // L(1, chi) = -(1/q) sum chi(r) psi(r/q), non-principal chi
        Real acc(0);
        for (long r = 1; r < chi.q; ++r) {
            int v = chi(r);
            if (v) acc += v * digamma(Real(r) / q);
        }
        return Complex(-acc / q);
    }
    Complex acc(0);
    for (long r = 1; r < chi.q; ++r) {
        int v = chi(r);
        if (v) acc += Complex((long)v) * hurwitz_zeta(s, Real(r) / q);
    }
    return pow(q, -s) * acc;
}

Complex gauss_sum(const DirichletCharacter& chi) {
    Complex acc(0);
    for (long r = 1; r < chi.q; ++r) {
        int v = chi(r);
        if (v) acc += Complex((long)v) * unit_e(Real(r) / Real(chi.q));
    }
    if (chi.q == 1) acc = Complex(1);
    return acc;
}

Complex root_number(const DirichletCharacter& chi) {
    Complex ipow = chi.delta == 0 ? Complex(1) : Complex(Real(0), Real(-1));
    return ipow * gauss_sum(chi) / Complex(sqrt(Real(chi.q)));
}

// ---------------------------------------------------------------------------
// Bessel J

Real bessel_j(const Real& nu, const Real& x) {
    if (!(x > 0) || nu < 0) throw std::domain_error("bessel_j: need x>0, nu>=0");
    unsigned P = policy().working_digits;
    unsigned guard = (unsigned)(0.4343 * x.convert_to<double>()) + 15;
    Real sum;
    {
        ScopedDigits scope(P + guard);
        Real eps = eps_at(P + guard);
        Real xs = lift_precision(x), ns = lift_precision(nu);
        Real x2 = xs * xs / 4;
        Real t = exp(ns * log(xs / 2) - log_gamma(ns + 1));
        sum = t;
        Real peak = abs(t);
        for (long m = 0; m < 1000000; ++m) {
            t *= -x2 / ((m + 1) * (ns + m + 1));
            sum += t;
            peak = std::max(peak, abs(t));
            if (abs(t) < eps * peak) break;
        }
    }
    return round_to_policy(sum);
}

Real bessel_j_mb(const Real& nu, const Real& x, const ContourSpec& spec) {
    if (!(spec.sigma > -1 - nu) || !(spec.sigma < 0))
        throw contour_error("bessel_j_mb: need -1-nu < sigma < 0");
    ContourSpec cs = spec;
    cs.wings = -1; // the integrand only decays algebraically on the line
    if (!(cs.height > 0)) cs.height = 2 * x + abs(nu) + 30;
    Complex lx(log(x)), l2(const_ln2());
    auto f = [&](const Complex& s) {
        Complex np = (Complex(nu + 1) + s) * Complex(Real(1) / 2);
        Complex nm = (Complex(nu + 1) - s) * Complex(Real(1) / 2);
        return exp(log_gamma(np) - log_gamma(nm) + s * l2 -
                   (s + Complex(1)) * lx);
    };
    return line_integral(f, cs, true).re;
}

// ---------------------------------------------------------------------------
// hypergeometric / Legendre

Complex hyp2f1(const Complex& a, const Complex& b, const Complex& c,
               const Complex& z) {
    if (is_integer(c) && c.re <= 0) throw pole_error("hyp2f1: c pole");
    if (!(abs(z) < 1)) throw std::domain_error("hyp2f1: need |z| < 1");
    if (z == Complex(0)) return Complex(1);
    unsigned P = policy().working_digits;

    unsigned digits = P + 10;
    for (int attempt = 0; attempt < 4; ++attempt) {
        Complex sum;
        double loss = 0;
        {
            ScopedDigits scope(digits);
            Real eps = eps_at(digits);
            Complex as = lift_precision(a), bs = lift_precision(b),
                    cs = lift_precision(c), zs = lift_precision(z);
            Real az = abs(zs);
            Complex term(1);
            sum = Complex(1);
            Real peak(1);
            bool done = false;
            for (long m = 0; m < 2000000; ++m) {
                term *= (as + Complex(m)) * (bs + Complex(m)) * zs /
                        ((cs + Complex(m)) * Complex(m + 1));
                sum += term;
                Real at = abs(term);
                peak = std::max(peak, at);
                // geometric tail certificate once the term ratio is < 1
                Real ratio = az * abs(as + Complex(m + 1)) *
                             abs(bs + Complex(m + 1)) /
                             (abs(cs + Complex(m + 1)) * (m + 2));
                if (ratio < 1 && at * ratio / (1 - ratio) < eps * abs(sum)) {
                    done = true;
                    break;
                }
            }
            if (!done) throw precision_failure("hyp2f1: series stalled");
            // a-posteriori cancellation check: escalate if the peak term ate
            // into the requested digits
            loss = std::max(
                0.0, (log(peak) - log(abs(sum))).convert_to<double>() /
                         2.302585092994046);
        }
        if (digits >= P + (unsigned)loss + 10)
            return Complex(round_to_policy(sum.re), round_to_policy(sum.im));
        digits = P + (unsigned)loss + 15;
    }
    throw precision_failure("hyp2f1: could not reach target precision");
}

Real legendre_p(const Real& mu, const Real& nu, const Real& x) {
    if (!(x > -1) || !(x < 1))
        throw std::domain_error("legendre_p: need -1 < x < 1");
    Real one_minus_mu = 1 - mu;
    if (is_integer(one_minus_mu) && one_minus_mu <= 0)
        throw pole_error("legendre_p: 1 - mu non-positive integer");
    Real pref = pow((1 + x) / (1 - x), mu / 2) / gamma_signed(one_minus_mu);
    Complex f = hyp2f1(Complex(-nu), Complex(nu + 1), Complex(one_minus_mu),
                       Complex((1 - x) / 2));
    return pref * f.re;
}

} // namespace ssm
