#include "ssm/asymptotics.hpp"

#include "ssm/arith.hpp"
#include "ssm/gmpconv.hpp"
#include "ssm/lvalues.hpp"

#include <chrono>
#include <cstdio>

namespace ssm {

namespace {

Real l_chi_half(long D) {
    // L(1/2, chi_D); recomputed per call, the Hurwitz route is fast
    return dirichlet_l(Complex(Real(1) / 2), quadratic_character(D)).re;
}

// completed L: Lambda(s, chi) = (q/pi)^{(s+delta)/2} Gamma((s+delta)/2) L(s, chi)
Complex completed_l(const Complex& s, const DirichletCharacter& chi) {
    Complex e = (s + Complex(Real(chi.delta))) / Real(2);
    return exp(e * Complex(log(Real(chi.q) / const_pi())) + log_gamma(e)) *
           dirichlet_l(s, chi);
}

int ik_real(int k) { // i^k = i^{-k} = (-1)^{k/2} for even k, as an exact integer
    return k % 4 == 0 ? 1 : -1;
}

Real log_gamma_ratio(const Real& a, const Real& b) { // Gamma(a)/Gamma(b) in logs
    return log_gamma(a) - log_gamma(b);
}

} // namespace

Real m1(int k) {
    if (k < 12 || k % 2) throw std::invalid_argument("m1: k must be even, >= 12");
    return digamma(Real(2 * k - 1) / 2) + 2 * const_euler() +
           digamma(Real(3) / 4) / 2 - log(Real(2) * pow(const_pi(), Real(3) / 2));
}

Real m1_residue_route(int k, const Real& h) {
    // phi(u) = u^2 H(u) (2 pi^{3/2})^{-u} R_b(u) zeta(1+2u), H(u) = e^{u^2/16}/u
    auto phi = [&](const Real& u) {
        Complex cu(u);
        Complex v = Complex(u * exp(u * u / 16)) *
                    exp(Complex(-u * log(Real(2) * pow(const_pi(), Real(3) / 2)))) *
                    r_b(k, cu) * riemann_zeta(Complex(Real(1) + 2 * u));
        return v.re;
    };
    return (phi(h) - phi(-h)) / h; // 2 * central difference
}

Real m_minus4(int k) {
    if (k % 2) throw std::invalid_argument("m_minus4: k must be even");
    return ik_real(k) * sqrt(const_pi() / 2) * l_chi_half(-4) *
           exp(log_gamma_ratio(Real(2 * k - 1) / 4, Real(2 * k + 1) / 4));
}

Real m_minus4_integral(int k) {
    // i^{-k} pi^{5/4} / (2 Gamma(3/4)) (1/2 pi i) int_(3) H(u)
    //   G((k-1/2+u)/2)/G((k-1/2)/2) G((k-1/2-u)/2)/G((k+1/2)/2)
    //   Lambda(1/2+u, chi_-4) du
    // (the closed form arises from this by oddness of the integrand plus the
    // residue at u = 0; evaluating it directly is the independent route)
    DirichletCharacter chi = quadratic_character(-4);
    Real lga = log_gamma(Real(2 * k - 1) / 4), lgb = log_gamma(Real(2 * k + 1) / 4);
    auto f = [&](const Complex& u) {
        Complex g = exp(log_gamma((Complex(Real(2 * k - 1) / 2) + u) / Real(2)) - Complex(lga) +
                        log_gamma((Complex(Real(2 * k - 1) / 2) - u) / Real(2)) - Complex(lgb));
        Complex H = exp(u * u / Real(16)) / u;
        return H * g * completed_l(Complex(Real(1) / 2) + u, chi);
    };
    ContourSpec cs{Real(3), sqrt(Real(16 * ((long)policy().working_digits + 12)) * log(Real(10))) + 4, 16, 0};
    Real val = line_integral(f, cs, /*conj_symmetric=*/true).re;
    return ik_real(k) * pow(const_pi(), Real(5) / 4) / (2 * gamma_signed(Real(3) / 4)) * val;
}

Real m_minus3(int k) {
    if (k % 2) throw std::invalid_argument("m_minus3: k must be even");
    // the 2F1 series at z = -1/3 peaks ~0.4k digits above its sum
    unsigned digits = policy().working_digits;
    unsigned need = (unsigned)(0.4 * k + 30);
    Real out;
    {
        ScopedDigits guard(need > digits ? need : digits);
        Real a = Real(2 * k - 1) / 4; // (k - 1/2)/2
        Complex F = hyp2f1(Complex(a), Complex(a), Complex(Real(1) / 2),
                           Complex(Real(-1) / 3));
        Real scale = exp((Real(2 * k - 1) / 2) * (const_ln2() - log(Real(3)) / 2) +
                         log_gamma_ratio(a, Real(2 * k + 1) / 4));
        out = ik_real(k) * sqrt(2 * const_pi()) * l_chi_half(-3) * scale * F.re;
    }
    return round_to_policy(out);
}

int s_of_k(int k) {
    switch (((k % 6) + 6) % 6) {
        case 0: return 1;
        case 2: return -1;
        case 4: return 0;
        default: throw std::invalid_argument("s_of_k: k must be even");
    }
}

Real m_minus3_prime(int k) {
    int s = s_of_k(k);
    if (s == 0) return Real(0);
    return s * pow(Real(3), Real(1) / 4) * sqrt(2 * const_pi()) * l_chi_half(-3) *
           exp(log_gamma_ratio(Real(2 * k - 1) / 2, Real(k)));
}

// ---------------------------------------------------------------------------

namespace {

Complex lift(const Complex& z) {
    return Complex(lift_precision(z.re), lift_precision(z.im));
}

void check_i_strip(const Complex& u, const Real& y, int k) {
    if (!(y > 0)) throw std::invalid_argument("I(u,y): y must be positive");
    if (!(u.re > Real(1) / 2) || !(u.re < Real(k - 4)))
        throw std::domain_error("I(u,y): need 1/2 < Re u < k - 4");
}

} // namespace

Complex i_closed(const Complex& u_in, const Real& y_in, int k) {
    check_i_strip(u_in, y_in, k);
    Complex u = lift(u_in); // guard against caller-side low-precision Reals
    Real y = lift_precision(y_in);
    Real km = Real(2 * k - 1) / 2; // k - 1/2
    Complex ik(Real(ik_real(k)));
    Complex cosf = cos(const_pi() / 2 * (Complex(Real(1) / 2) + u));
    if (y < 2) {
        Complex g = exp(log_gamma((Complex(km) - u) / Real(2)) -
                        log_gamma((Complex(km) + Complex(Real(1)) + u) / Real(2)));
        return g * hyp2f1((Complex(km) - u) / Real(2),
                          (Complex(Real(3 - 2 * k) / 2) - u) / Real(2),
                          Complex(Real(1) / 2), Complex(y * y / 4));
    }
    if (y == 2) {
        return ik * pow(Real(2), Real(2) * u) * cosf / sqrt(const_pi()) * cgamma(u) *
               exp(log_gamma(Complex(km) - u) - log_gamma(Complex(km) + u));
    }
    return Real(2) * ik * cosf *
           exp(-(Complex(km) - u) * Complex(log(y)) +
               log_gamma(Complex(km) - u) - Complex(log_gamma(Real(k)))) *
           hyp2f1((Complex(km) - u) / Real(2),
                  (Complex(km) + Complex(Real(1)) - u) / Real(2), Complex(Real(k)),
                  Complex(4 / (y * y)));
}

Complex i_numeric(const Complex& u_in, const Real& y_in, int k, const ContourSpec& spec) {
    check_i_strip(u_in, y_in, k);
    Complex u = lift(u_in);
    Real y = lift_precision(y_in);
    if (y == 2)
        throw std::invalid_argument("i_numeric: neither wing direction decays at y = 2");
    ContourSpec cs = spec;
    if (cs.height == 0) cs.height = 24;
    if (cs.panels <= 0) cs.panels = 10;
    cs.wings = y < 2 ? -1 : +1;
    Real km = Real(2 * k - 1) / 2, ly = log(y);
    auto f = [&](const Complex& z) {
        return exp(log_gamma((Complex(km) - u - z) / Real(2)) -
                   log_gamma((Complex(km) + Complex(Real(1)) + u + z) / Real(2)) +
                   log_gamma(z) - z * Complex(ly)) *
               cos(const_pi() / 2 * z);
    };
    return line_integral(f, cs, /*conj_symmetric=*/u.im == 0);
}

// ---------------------------------------------------------------------------

Real dummigan_beta(int k, int r) {
    if (r % 2 == 0 || r < 3 || r > k - 1)
        throw std::domain_error("dummigan_beta: need odd r with 3 <= r <= k-1");
    mpq_class c1 = p_coeff(k, r, 2, 1) + p_coeff(k, r, -2, 1);
    mpq_class c4 = p_coeff(k, r, 0, 1);
    mpq_class c3 = p_coeff(k, r, 1, 1) + p_coeff(k, r, -1, 1);
    if (r == k - 1) c1 += mpq_class(2 * k) / bernoulli((unsigned)k);
    Real z = riemann_zeta(Complex(Real(1 - 2 * r))).re;
    Real l4 = dirichlet_l(Complex(Real(1 - r)), quadratic_character(-4)).re;
    Real l3 = dirichlet_l(Complex(Real(1 - r)), quadratic_character(-3)).re;
    Real beta = to_real(c1) * z + to_real(c4) * l4 + to_real(c3) * l3;
    return -pow(2 * const_pi(), 2 * r) / 4 *
           exp(log_gamma_ratio(Real(k - r), Real(k + r - 1))) * beta;
}

Real moment_rhs(int k) { return m1(k) + m_minus4(k) + m_minus3(k); }

std::string policy_fingerprint() {
    const PrecisionPolicy& p = policy();
    char buf[96];
    std::snprintf(buf, sizeof buf, "digits=%u;abs=%.3g;rel=%.3g", p.working_digits,
                  p.target_abs_tol, p.target_rel_tol);
    return buf;
}

MomentReport moment_report(int k) {
    auto t0 = std::chrono::steady_clock::now();
    MomentReport r;
    r.k = k;
    r.lhs = moment_lhs(k);
    r.m1 = m1(k);
    r.m_minus4 = m_minus4(k);
    r.m_minus3 = m_minus3(k);
    r.residual = r.lhs - (r.m1 + r.m_minus4 + r.m_minus3);
    r.fingerprint = policy_fingerprint();
    r.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

} // namespace ssm
