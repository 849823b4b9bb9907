#include "ssm/lvalues.hpp"

#include "ssm/arith.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace ssm {

Complex afe_kernel(const AfeKernelSpec& spec, const Complex& u) {
    Complex u2 = u * u;
    if (spec.kernel == KernelKind::gaussian) return exp(spec.gaussian_a * u2) / u;
    return exp(-(u2 * u2)) / u;
}

Complex r_a(int k, const Complex& u) {
    Real a = Real(2 * k - 1) / 4; // (k - 1/2)/2
    Real b = Real(2 * k + 1) / 4; // (k + 1/2)/2
    Real c = Real(3) / 4;
    Complex h = u / Real(2);
    return exp(log_gamma(Complex(a) + h) - log_gamma(a) + log_gamma(Complex(b) + h) -
               log_gamma(b) + log_gamma(Complex(c) + h) - log_gamma(c));
}

Complex r_b(int k, const Complex& u) {
    Real a = Real(2 * k - 1) / 2; // k - 1/2
    Real c = Real(3) / 4;
    return exp(log_gamma(Complex(a) + u) - log_gamma(a) +
               log_gamma(Complex(c) + u / Real(2)) - log_gamma(c));
}

// ---------------------------------------------------------------------------
// the V_k contour integrand (without the y^{-u} factor):
//   g(u) = G(u)/u (2 pi^{3/2})^{-u} R_b(u) zeta(1+2u)/zeta(1/2+u)

namespace {

struct VkIntegrand {
    int k;
    AfeKernelSpec spec;
    Real lg_k, lg_34, log_c; // log Gamma(k-1/2), log Gamma(3/4), log(2 pi^{3/2})

    explicit VkIntegrand(int k_, const AfeKernelSpec& sp) : k(k_), spec(sp) {
        lg_k = log_gamma(Real(2 * k - 1) / 2);
        lg_34 = log_gamma(Real(3) / 4);
        log_c = const_ln2() + Real(3) / 2 * log(const_pi());
    }

    Complex operator()(const Complex& u) const {
        Complex lg = log_gamma(Complex(Real(2 * k - 1) / 2) + u) - Complex(lg_k) +
                     log_gamma(Complex(Real(3) / 4) + u / Real(2)) - Complex(lg_34) -
                     u * Complex(log_c);
        Complex z = riemann_zeta(Complex(Real(1)) + Real(2) * u) /
                    riemann_zeta(Complex(Real(1) / 2) + u);
        return afe_kernel(spec, u) * exp(lg) * z;
    }
};

// height at which |G| has decayed below 10^{-(P+12)} relative to its size on
// the real axis (the gamma/zeta factors only help beyond that)
Real kernel_height(const AfeKernelSpec& spec, const Real& sigma) {
    Real W = Real((long)policy().working_digits + 12) * log(Real(10));
    if (spec.kernel == KernelKind::gaussian) return sqrt(W / spec.gaussian_a) + 4;
    // |e^{-u^4}| = e^{-(t^4 - 6 s^2 t^2 + s^4)}: solve t^4 - 6 s^2 t^2 = W - s^4
    Real s2 = sigma * sigma;
    return sqrt(3 * s2 + sqrt(Real(8) * s2 * s2 + W)) + 2;
}

void check_sigma(const Real& sigma) {
    if (!(sigma > Real(1) / 2) || !(sigma <= 3))
        throw contour_error("v_kernel: contour abscissa must lie in (1/2, 3]");
}

std::string cache_key(int k, const AfeKernelSpec& spec, bool with_sigma) {
    std::ostringstream os;
    os << k << '|' << (int)spec.kernel << '|' << format_real(spec.gaussian_a, 20)
       << '|' << policy().working_digits;
    if (with_sigma) os << '|' << format_real(spec.contour.sigma, 20);
    return os.str();
}

} // namespace

Real v_kernel(const Real& y, int k, const AfeKernelSpec& spec) {
    if (!(y > 0)) throw std::invalid_argument("v_kernel: y must be positive");
    if (k < 4 || k % 2) throw std::invalid_argument("v_kernel: k must be even and >= 4");
    check_sigma(spec.contour.sigma);
    ContourSpec cs = spec.contour;
    if (cs.height == 0) cs.height = kernel_height(spec, cs.sigma);
    if (cs.panels <= 0) cs.panels = std::max(8, (int)(double)(cs.height / 3));
    VkIntegrand g(k, spec);
    Real ly = log(y);
    auto f = [&](const Complex& u) { return exp(-(u * Complex(ly))) * g(u); };
    return line_integral(f, cs, /*conj_symmetric=*/true).re;
}

Real VkTable::eval(const Real& y) const {
    Real ly = log(y);
    Real th = h * ly;
    Complex rho(cos(th), -sin(th)); // e^{-i h log y}
    Complex p(Real(1)), acc;
    for (const Complex& c : coef) {
        acc += c * p;
        p *= rho;
    }
    return exp(-sigma * ly) * acc.re / const_pi();
}

const VkTable& vk_table(int k, const AfeKernelSpec& spec) {
    check_sigma(spec.contour.sigma);
    thread_local std::map<std::string, VkTable> cache;
    std::string key = cache_key(k, spec, /*with_sigma=*/true);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    VkTable t;
    t.k = k;
    t.sigma = spec.contour.sigma;
    // Uniform trapezoid step: the integrand is analytic in a strip of width
    // ~0.8 around the contour (the u = 0 pole and the zeta zeros both sit at
    // Re u = 0, distance >= 1/2 from any admissible sigma), so the
    // discretization error is ~ M e^{-2 pi 0.8 / h} with M the integrand size
    // on the shifted lines.  M ~ 1 for the Gaussian kernel but e^{8(s+0.8)^4}
    // for the quartic one, which the step has to absorb.
    unsigned P = policy().working_digits;
    Real ln10 = log(Real(10));
    Real work = ln10 * Real((long)P + 8);
    if (spec.kernel == KernelKind::quartic) {
        Real sd = t.sigma + Real(4) / 5;
        work += Real(8) * sd * sd * sd * sd;
    }
    t.h = Real(8) / 5 * const_pi() / work;
    Real T = kernel_height(spec, t.sigma);
    long J = (long)ceil(T / t.h);
    VkIntegrand g(k, spec);
    t.coef.reserve((size_t)J + 1);
    for (long j = 0; j <= J; ++j) {
        Complex c = Complex(t.h) * g(Complex(t.sigma, Real(j) * t.h));
        if (j == 0) c = c / Complex(Real(2));
        t.coef.push_back(c);
    }
    return cache.emplace(key, std::move(t)).first->second;
}

// ---------------------------------------------------------------------------
// tail certificates: |V_k(y)| <= y^{-s_b} B(s_b) for any shift abscissa
// s_b > 1/2 (the integrand is analytic and decaying there), with B(s_b) a
// numeric upper bound for (1/pi) int_0^inf |g(s_b + it)| dt.  With
// |lambda(n)| <= d(n) and d(n)^2 <= 4n,
//   |2 sum_{n>X} lambda(n)^2 V(n)/sqrt(n)| <= 8 B(s_b) X^{3/2-s_b}/(s_b-3/2).

namespace {

// coarse positive-integrand trapezoid with a x2 safety factor
Real abs_line_bound(const VkIntegrand& g, const Real& sb) {
    Real hb = Real(1) / 4, sum = 0, pi = const_pi();
    for (long j = 0; j <= 4000; ++j) {
        Real t = Real(j) * hb;
        Real term = abs(g(Complex(sb, t)));
        if (j == 0) term /= 2;
        sum += term;
        if (t > 2 * sb + 8 && term < sum * 1e-40) break;
    }
    return Real(2) * hb * sum / pi;
}

const std::vector<std::pair<Real, Real>>& tail_profile(int k,
                                                       const AfeKernelSpec& spec) {
    thread_local std::map<std::string, std::vector<std::pair<Real, Real>>> cache;
    std::string key = cache_key(k, spec, /*with_sigma=*/false);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    // The quartic kernel explodes off the real axis, so only abscissas just
    // past the convergence boundary 3/2 are worth probing; its certificates
    // come out astronomically weak, which is exactly why it is not the
    // default kernel.
    std::vector<double> grid = spec.kernel == KernelKind::gaussian
                                   ? std::vector<double>{8, 14, 22, 28, 34, 40}
                                   : std::vector<double>{1.8, 2.2, 2.6, 3.0};
    VkIntegrand g(k, spec);
    std::vector<std::pair<Real, Real>> prof;
    for (double s : grid) {
        Real sb(s);
        prof.emplace_back(sb, abs_line_bound(g, sb));
    }
    return cache.emplace(key, std::move(prof)).first->second;
}

} // namespace

Real afe_tail_bound(int k, const AfeKernelSpec& spec, long n_cutoff) {
    if (n_cutoff < 1) throw std::invalid_argument("afe_tail_bound: n_cutoff >= 1");
    Real best = 0;
    bool first = true;
    for (const auto& [sb, B] : tail_profile(k, spec)) {
        Real bound = Real(8) * B * pow(Real(n_cutoff), Real(3) / 2 - sb) / (sb - Real(3) / 2);
        if (first || bound < best) best = bound;
        first = false;
    }
    return best;
}

long afe_cutoff(int k, const AfeKernelSpec& spec, Real& tail_out) {
    Real tol = Real(policy().target_abs_tol);
    long best = -1;
    for (const auto& [sb, B] : tail_profile(k, spec)) {
        // X^{s_b - 3/2} >= 8 B / (tol (s_b - 3/2))
        Real rhs = Real(8) * B / (tol * (sb - Real(3) / 2));
        long X = 8;
        if (rhs > 1) {
            Real lx = log(rhs) / (sb - Real(3) / 2);
            if (lx > 16) continue; // > e^16: this abscissa is useless
            X = std::max(8L, (long)(double)ceil(exp(lx)));
        }
        if (best < 0 || X < best) best = X;
    }
    if (best < 0)
        throw precision_failure("afe_cutoff: no usable tail certificate at this "
                                "tolerance (quartic kernel?)");
    tail_out = afe_tail_bound(k, spec, best);
    return best;
}

Real sym2_central_afe(const HeckeEigenform& f, AfeKernelSpec& spec) {
    int k = f.k;
    if (spec.n_cutoff == 0)
        spec.n_cutoff = afe_cutoff(k, spec, spec.tail_estimate);
    else
        spec.tail_estimate = afe_tail_bound(k, spec, spec.n_cutoff);
    if (!(spec.tail_estimate < Real(policy().target_abs_tol)))
        throw precision_failure("sym2_central_afe: certified tail " +
                                format_real(spec.tail_estimate, 3) +
                                " exceeds the policy tolerance");
    if ((long)f.lambda.size() <= spec.n_cutoff)
        throw std::invalid_argument("sym2_central_afe: lambda table too short, need " +
                                    std::to_string(spec.n_cutoff + 1) + " entries");
    const VkTable& t = vk_table(k, spec);
    Real sum = 0;
    for (long n = 1; n <= spec.n_cutoff; ++n)
        sum += f.lambda[(size_t)n] * f.lambda[(size_t)n] * t.eval(Real(n)) / sqrt(Real(n));
    return Real(2) * sum;
}

// ---------------------------------------------------------------------------
// Hecke relations: lambda(p^j) = lambda(p) lambda(p^{j-1}) - lambda(p^{j-2})

std::vector<Real> lambda_square_table(const HeckeEigenform& f, long n_max) {
    if ((long)f.lambda.size() <= n_max)
        throw std::invalid_argument("lambda_square_table: need lambda up to " +
                                    std::to_string(n_max));
    auto spf = spf_sieve(n_max);
    std::map<long, std::vector<Real>> chain; // chain[p][j] = lambda(p^j)
    auto lambda_pj = [&](long p, long j) -> const Real& {
        auto& c = chain[p];
        if (c.empty()) {
            c.push_back(Real(1));
            c.push_back(f.lambda[(size_t)p]);
        }
        while ((long)c.size() <= j) {
            size_t s = c.size();
            c.push_back(c[1] * c[s - 1] - c[s - 2]);
        }
        return c[(size_t)j];
    };
    std::vector<Real> out((size_t)n_max + 1, Real(0));
    if (n_max >= 1) out[1] = 1;
    for (long n = 2; n <= n_max; ++n) {
        long m = n;
        Real v = 1;
        while (m > 1) {
            long p = spf[(size_t)m], e = 0;
            while (m % p == 0) m /= p, ++e;
            v *= lambda_pj(p, 2 * e);
        }
        out[(size_t)n] = v;
    }
    return out;
}

// ---------------------------------------------------------------------------
// oracle route through the completed functional equation.  With
//   Lambda(s) = L_inf(s) L(s),  L_inf = pi^{-3s/2} G((s+1)/2) G((s+k-1)/2)
//   G((s+k)/2),  Lambda(s) = Lambda(1-s),
// pushing (1/2 pi i) int_(c) Lambda(s0+u) e^{b u^2} du/u across u = 0 gives
//   L(s0) = sum_m A(m) [ m^{-s0} G1(m) + m^{s0-1} G2(m) ],
//   Gi(m) = (1/2 pi i) int_(c) L_inf(si+u)/L_inf(s0) m^{-u} e^{b u^2} du/u,
// with s1 = s0, s2 = 1 - s0 and A(m) = sum_{a^2 b = m} lambda(b^2).

namespace {

Complex log_linf(int k, const Complex& s) {
    return log_gamma((s + Complex(Real(1))) / Real(2)) +
           log_gamma((s + Complex(Real(k - 1))) / Real(2)) +
           log_gamma((s + Complex(Real(k))) / Real(2)) -
           Real(3) / 2 * log(const_pi()) * s;
}

struct OracleIntegrand {
    int k;
    Real base, b; // evaluates around L_inf(base + u)
    Complex lref; // log L_inf(s0)

    Complex operator()(const Complex& u) const {
        return exp(b * (u * u)) / u * exp(log_linf(k, Complex(base) + u) - lref);
    }
};

struct OracleTable {
    Real sigma, h;
    std::vector<Complex> c1, c2; // j = 0 entries halved
};

std::string oracle_key(int k, const Real& s0, const Real& b) {
    std::ostringstream os;
    os << k << '|' << format_real(s0, 25) << '|' << format_real(b, 20) << '|'
       << policy().working_digits;
    return os.str();
}

const OracleTable& oracle_table(int k, const Real& s0, const Real& b) {
    thread_local std::map<std::string, OracleTable> cache;
    std::string key = oracle_key(k, s0, b);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    OracleTable t;
    t.sigma = 2;
    unsigned P = policy().working_digits;
    t.h = Real(8) / 5 * const_pi() / (log(Real(10)) * Real((long)P + 8));
    Real T = sqrt(Real((long)P + 12) * log(Real(10)) / b) + 4;
    long J = (long)ceil(T / t.h);
    Complex lref = log_linf(k, Complex(s0));
    OracleIntegrand g1{k, s0, b, lref}, g2{k, Real(1) - s0, b, lref};
    t.c1.reserve((size_t)J + 1);
    t.c2.reserve((size_t)J + 1);
    for (long j = 0; j <= J; ++j) {
        Complex u(t.sigma, Real(j) * t.h);
        Complex a = Complex(t.h) * g1(u), c = Complex(t.h) * g2(u);
        if (j == 0) {
            a = a / Complex(Real(2));
            c = c / Complex(Real(2));
        }
        t.c1.push_back(a);
        t.c2.push_back(c);
    }
    return cache.emplace(key, std::move(t)).first->second;
}

Real abs_line_bound(const OracleIntegrand& g, const Real& sb) {
    Real hb = Real(1) / 4, sum = 0;
    for (long j = 0; j <= 4000; ++j) {
        Real t = Real(j) * hb;
        Real term = abs(g(Complex(sb, t)));
        if (j == 0) term /= 2;
        sum += term;
        if (t > 2 * sb + 8 && term < sum * 1e-40) break;
    }
    return Real(2) * hb * sum / const_pi();
}

// |A(m)| <= sum_{a^2 | m} d((m/a^2)^2) <= sum 4 (m/a^2) <= (2 pi^2/3) m < 7m,
// so the two tails beyond X are bounded by
//   7 B1 X^{2-s0-s}/(s+s0-2)  and  7 B2 X^{1+s0-s}/(s-s0-1).
struct OracleTails {
    std::vector<std::pair<Real, std::pair<Real, Real>>> prof; // (s, (B1, B2))
};

const OracleTails& oracle_tails(int k, const Real& s0, const Real& b) {
    thread_local std::map<std::string, OracleTails> cache;
    std::string key = oracle_key(k, s0, b);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    Complex lref = log_linf(k, Complex(s0));
    OracleTails t;
    for (double off : {3.5, 6.0, 10.0, 16.0, 24.0}) {
        Real sb = s0 + Real(off);
        OracleIntegrand g1{k, s0, b, lref}, g2{k, Real(1) - s0, b, lref};
        t.prof.push_back({sb, {abs_line_bound(g1, sb), abs_line_bound(g2, sb)}});
    }
    return cache.emplace(key, std::move(t)).first->second;
}

// the oracle is a cross-check; anything far below the criteria tolerances is
// enough, so its truncation targets max(policy tol, 1e-25)
Real oracle_tol() {
    Real tol = Real(policy().target_abs_tol);
    if (tol < 1e-25) tol = 1e-25;
    return tol;
}

} // namespace

long oracle_cutoff(int k, const Real& s0, const Real& kernel_b) {
    Real tol = oracle_tol();
    long best = -1;
    for (const auto& [sb, B] : oracle_tails(k, s0, kernel_b).prof) {
        // split tol in half between the two sums
        Real e1 = sb + s0 - 2, e2 = sb - s0 - 1;
        if (!(e1 > 0) || !(e2 > 0)) continue;
        Real r1 = Real(14) * B.first / (tol * e1);
        Real r2 = Real(14) * B.second / (tol * e2);
        Real lx = 0;
        if (r1 > 1) lx = log(r1) / e1;
        if (r2 > 1 && log(r2) / e2 > lx) lx = log(r2) / e2;
        if (lx > 16) continue;
        long X = std::max(8L, (long)(double)ceil(exp(lx)));
        if (best < 0 || X < best) best = X;
    }
    if (best < 0)
        throw precision_failure("oracle_cutoff: no usable tail certificate");
    return best;
}

Real sym2_oracle_at(const HeckeEigenform& f, const Real& s0, const Real& kernel_b) {
    if (!(kernel_b > 0))
        throw std::invalid_argument("sym2_oracle_at: kernel width must be positive");
    if (!(s0 > 0) || !(s0 <= 3))
        throw std::invalid_argument("sym2_oracle_at: s0 must lie in (0, 3]");
    int k = f.k;
    long M = oracle_cutoff(k, s0, kernel_b);
    if ((long)f.lambda.size() <= M)
        throw std::invalid_argument("sym2_oracle_at: lambda table too short, need " +
                                    std::to_string(M + 1) + " entries");

    std::vector<Real> lam2 = lambda_square_table(f, M);
    std::vector<Real> A((size_t)M + 1, Real(0));
    for (long a = 1; a * a <= M; ++a)
        for (long bb = 1; a * a * bb <= M; ++bb) A[(size_t)(a * a * bb)] += lam2[(size_t)bb];

    const OracleTable& t = oracle_table(k, s0, kernel_b);
    size_t J = t.c1.size();
    Real pi = const_pi();
    Real total = 0;
    for (long m = 1; m <= M; ++m) {
        if (A[(size_t)m] == 0) continue;
        Real lm = log(Real(m));
        Real th = t.h * lm;
        Complex rho(cos(th), -sin(th));
        Complex p(Real(1));
        Real a1 = 0, a2 = 0;
        for (size_t j = 0; j < J; ++j) {
            a1 += t.c1[j].re * p.re - t.c1[j].im * p.im;
            a2 += t.c2[j].re * p.re - t.c2[j].im * p.im;
            p *= rho;
        }
        Real damp = exp(-t.sigma * lm) / pi;
        total += A[(size_t)m] *
                 (exp(-s0 * lm) * a1 * damp + exp((s0 - Real(1)) * lm) * a2 * damp);
    }
    return total;
}

Real sym2_central_oracle(const HeckeEigenform& f) {
    return sym2_oracle_at(f, Real(1) / 2);
}

// ---------------------------------------------------------------------------

Real sym2_series(const HeckeEigenform& f, const Real& s, Real* tail_out) {
    if (!(s > 0)) throw std::invalid_argument("sym2_series: s must be positive");
    if (s < Real(5) / 2) {
        // Inside/near the critical strip absolute-value tail bounds are
        // useless; the completed-FE route is rigorous there instead.
        if (tail_out) *tail_out = oracle_tol();
        return sym2_oracle_at(f, s);
    }
    long N = s >= 4 ? 10000 : 100000;
    if ((long)f.lambda.size() <= N)
        throw std::invalid_argument("sym2_series: need lambda up to " + std::to_string(N));
    std::vector<Real> lam2 = lambda_square_table(f, N);
    Real sum = 0;
    for (long n = 1; n <= N; ++n) sum += lam2[(size_t)n] * exp(-s * log(Real(n)));
    Real z = riemann_zeta(Complex(Real(2) * s)).re;
    if (tail_out) {
        // |lambda(n^2)| <= d(n^2) <= d(n)^2 and sum_{n<=Y} d(n)^2 <=
        // sum_{n<=Y} d4(n) <= Y (1 + log Y)^3, summed over dyadic blocks
        Real tail = 0;
        for (int j = 0;; ++j) {
            Real Y = Real(2) * pow(Real(2), j) * N;
            Real block = Y * pow(Real(1) + log(Y), 3) * exp(-s * log(pow(Real(2), j) * N));
            tail += block;
            if (block < tail * 1e-30) break;
            if (j > 500) break;
        }
        *tail_out = z * tail;
    }
    return z * sum;
}

Real moment_lhs(int k) { return moment_lhs(k, Real(1)); }

Real moment_lhs(int k, const Real& afe_sigma) {
    AfeKernelSpec spec;
    spec.contour.sigma = lift_precision(afe_sigma);
    Real tail;
    long X = afe_cutoff(k, spec, tail);
    const auto& forms = eigenbasis(k, X + X / 5 + 8);
    Real total = 0;
    for (const auto& f : forms) {
        AfeKernelSpec sp = spec;
        sp.n_cutoff = X;
        total += f.w * sym2_central_afe(f, sp);
    }
    return total;
}

} // namespace ssm
