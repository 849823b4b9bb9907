#include "ssm/modforms.hpp"

#include "ssm/arith.hpp"
#include "ssm/gmpconv.hpp"
#include "ssm/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace ssm {

using boost::multiprecision::abs;
using boost::multiprecision::exp;
using boost::multiprecision::log;
using boost::multiprecision::pow;
using boost::multiprecision::sqrt;

// ---------------------------------------------------------------------------
// Kronecker-substitution series multiplication.
//
// Shift each coefficient into [0, 2L] (L = max |coefficient|), pack the
// shifted coefficients into fixed 64-bit-aligned slots of one big integer,
// and let GMP's FFT do the whole convolution in a single multiply.  With
// A = A' - L_A J and B = B' - L_B J (J = all-ones),
//   A*B = A'*B' - L_A (J*B') - L_B (A'*J) + L_A L_B (J*J),
// and J*X is just prefix sums, so the correction is linear time.

std::vector<mpz_class> series_mul(const std::vector<mpz_class>& A,
                                  const std::vector<mpz_class>& B, long N) {
    static_assert(sizeof(mp_limb_t) == 8, "64-bit GMP limbs assumed");
    if (N < 0) return {};
    mpz_class LA = 0, LB = 0;
    for (long i = 0; i <= N && i < (long)A.size(); ++i) {
        mpz_class t = abs(A[(size_t)i]);
        if (t > LA) LA = t;
    }
    for (long i = 0; i <= N && i < (long)B.size(); ++i) {
        mpz_class t = abs(B[(size_t)i]);
        if (t > LB) LB = t;
    }
    // slot value bound: (N+1) * (2 LA) * (2 LB); +1 bit of headroom
    mpz_class bound = 4 * mpz_class(N + 1) * LA * LB + 1;
    size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2) + 1;
    size_t limbs = (bits + 63) / 64;
    size_t slots = (size_t)N + 1;

    auto packed = [&](const std::vector<mpz_class>& V, const mpz_class& L) {
        std::vector<mp_limb_t> buf(slots * limbs + 1, 0);
        mpz_class t;
        for (size_t i = 0; i < slots; ++i) {
            t = (i < V.size() ? V[i] : mpz_class(0)) + L;
            if (t != 0) {
                size_t cnt = 0;
                mpz_export(buf.data() + i * limbs, &cnt, -1, sizeof(mp_limb_t),
                           0, 0, t.get_mpz_t());
            }
        }
        mpz_class X;
        mpz_import(X.get_mpz_t(), buf.size(), -1, sizeof(mp_limb_t), 0, 0,
                   buf.data());
        return X;
    };

    mpz_class Z = packed(A, LA) * packed(B, LB);
    // keep only the slots we unpack (the product has twice as many)
    mpz_tdiv_r_2exp(Z.get_mpz_t(), Z.get_mpz_t(),
                    (mp_bitcnt_t)(slots * limbs * 64));

    std::vector<mp_limb_t> out(slots * limbs + 16, 0);
    size_t cnt = 0;
    mpz_export(out.data(), &cnt, -1, sizeof(mp_limb_t), 0, 0, Z.get_mpz_t());

    std::vector<mpz_class> C(slots);
    mpz_class prefA = 0, prefB = 0, slot, corr;
    for (size_t n = 0; n < slots; ++n) {
        mpz_import(slot.get_mpz_t(), limbs, -1, sizeof(mp_limb_t), 0, 0,
                   out.data() + n * limbs);
        if (n < A.size()) prefA += A[n];
        if (n < B.size()) prefB += B[n];
        corr = LA * prefB + LB * prefA + mpz_class(n + 1) * LA * LB;
        C[n] = slot - corr;
    }
    return C;
}

QExpansion qexp_mul(const QExpansion& f, const QExpansion& g) {
    long N = std::min(f.length(), g.length());
    QExpansion h;
    h.k = f.k + g.k;
    h.a = series_mul(f.a, g.a, N);
    return h;
}

// ---------------------------------------------------------------------------
// Eisenstein series, Delta, and a small in-process cache of the power
// products the Miller basis is built from.

QExpansion eisenstein(int k, long N) {
    if (k < 4 || k % 2) throw std::invalid_argument("eisenstein: bad weight");
    // E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n; only weights where the
    // leading factor is an integer are supported (the basis code never needs
    // the others -- e.g. weight 12 appears only as E4^3)
    mpq_class factq = mpq_class(-2 * k) / bernoulli((unsigned)k);
    if (factq.get_den() != 1)
        throw std::invalid_argument("eisenstein: non-integral coefficients");
    mpz_class fact = factq.get_num();

    std::vector<mpz_class> s((size_t)N + 1, 0);
    mpz_class pw;
    for (long d = 1; d <= N; ++d) {
        mpz_ui_pow_ui(pw.get_mpz_t(), (unsigned long)d, (unsigned long)(k - 1));
        for (long m = d; m <= N; m += d) s[(size_t)m] += pw;
    }
    QExpansion E;
    E.k = k;
    E.a.resize((size_t)N + 1);
    E.a[0] = 1;
    for (long n = 1; n <= N; ++n) E.a[(size_t)n] = fact * s[(size_t)n];
    return E;
}

QExpansion delta_form(long N) {
    QExpansion E4 = eisenstein(4, N), E6 = eisenstein(6, N);
    std::vector<mpz_class> e43 =
        series_mul(series_mul(E4.a, E4.a, N), E4.a, N);
    std::vector<mpz_class> e62 = series_mul(E6.a, E6.a, N);
    QExpansion D;
    D.k = 12;
    D.a.resize((size_t)N + 1);
    for (long n = 0; n <= N; ++n) {
        mpz_class num = e43[(size_t)n] - e62[(size_t)n];
        mpz_divexact_ui(D.a[(size_t)n].get_mpz_t(), num.get_mpz_t(), 1728);
    }
    return D;
}

long dim_cusp_forms(int k) {
    if (k < 12 || k % 2) return 0;
    return k / 12 - (k % 12 == 2 ? 1 : 0);
}

namespace {

// cache of named series (E4, E6, delta and their powers) per truncation
const QExpansion& cached_series(const std::string& name, long N) {
    static thread_local std::map<std::pair<std::string, long>, QExpansion>
        cache;
    auto key = std::make_pair(name, N);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    QExpansion q;
    if (name == "E4") {
        q = eisenstein(4, N);
    } else if (name == "E6") {
        q = eisenstein(6, N);
    } else if (name == "D1") {
        q = delta_form(N);
    } else {
        // power tag: base^e
        auto caret = name.find('^');
        std::string base = name.substr(0, caret);
        int e = std::stoi(name.substr(caret + 1));
        if (e == 1) {
            q = cached_series(base, N);
        } else {
            q = qexp_mul(cached_series(base + "^" + std::to_string(e - 1), N),
                         cached_series(base, N));
        }
    }
    return cache.emplace(key, std::move(q)).first->second;
}

std::string cache_dir() {
    const char* d = std::getenv("SYM2_CACHE_DIR");
    return d ? std::string(d) : std::string();
}

bool load_miller(const std::string& path, int k, long N, long d,
                 std::vector<QExpansion>& rows) {
    std::ifstream in(path);
    if (!in) return false;
    int fk;
    long fN, fd;
    if (!(in >> fk >> fN >> fd) || fk != k || fN != N || fd != d) return false;
    rows.assign((size_t)d, QExpansion{});
    for (long i = 0; i < d; ++i) {
        rows[(size_t)i].k = k;
        rows[(size_t)i].a.resize((size_t)N + 1);
        for (long n = 0; n <= N; ++n)
            if (!(in >> rows[(size_t)i].a[(size_t)n])) return false;
    }
    return true;
}

void save_miller(const std::string& path, int k, long N,
                 const std::vector<QExpansion>& rows) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) return;
        out << k << " " << N << " " << rows.size() << "\n";
        for (const auto& r : rows) {
            for (long n = 0; n <= N; ++n)
                out << r.a[(size_t)n] << (n == N ? "\n" : " ");
        }
        if (!out) return;
    }
    std::rename(tmp.c_str(), path.c_str());
}

} // namespace

std::vector<QExpansion> miller_basis(int k, long N) {
    long d = dim_cusp_forms(k);
    std::vector<QExpansion> rows;
    if (d == 0) return rows;
    if (N < d) N = d;

    std::string cpath;
    if (N >= 10000 && !cache_dir().empty()) {
        cpath = cache_dir() + "/miller_k" + std::to_string(k) + "_N" +
                std::to_string(N) + ".txt";
        if (load_miller(cpath, k, N, d, rows)) return rows;
    }

    // F_i = Delta^i E4^a E6^b with 4a + 6b = k - 12i starts at q^i with
    // coefficient 1
    for (long i = 1; i <= d; ++i) {
        long rem = k - 12 * i;
        long b = -1;
        for (long bb = 0; 6 * bb <= rem; ++bb)
            if ((rem - 6 * bb) % 4 == 0) {
                b = bb;
                break;
            }
        if (b < 0) throw std::logic_error("miller_basis: no 4a+6b split");
        long a = (rem - 6 * b) / 4;

        QExpansion f = cached_series("D1^" + std::to_string(i), N);
        if (a > 0) f = qexp_mul(f, cached_series("E4^" + std::to_string(a), N));
        if (b > 0) f = qexp_mul(f, cached_series("E6^" + std::to_string(b), N));
        f.k = k;
        f.a.resize((size_t)N + 1); // qexp_mul keeps length; be defensive
        rows.push_back(std::move(f));
    }

    // Gauss-Jordan on columns 1..d.  Row i (leading coefficient 1 at q^i) has
    // exact zeros in all earlier columns, so the multipliers are the integer
    // entries themselves and the basis stays integral.
    for (long i = 2; i <= d; ++i) {
        const auto& pivot = rows[(size_t)i - 1].a;
        for (long j = 1; j < i; ++j) {
            mpz_class c = rows[(size_t)j - 1].a[(size_t)i];
            if (c == 0) continue;
            auto& row = rows[(size_t)j - 1].a;
            for (long n = i; n <= N; ++n) row[(size_t)n] -= c * pivot[(size_t)n];
        }
    }

    if (!cpath.empty()) save_miller(cpath, k, N, rows);
    return rows;
}

// ---------------------------------------------------------------------------
// Hecke operator T_p on the Miller basis, exact characteristic polynomial,
// root isolation, and eigenvector transport.

namespace {

// matrix of T_p (p prime) in the echelon basis: column j = first d
// coefficients of T_p g_j, which are its coordinates since the basis is
// echelonized.  Integer entries.
std::vector<std::vector<mpz_class>> hecke_matrix(
    const std::vector<QExpansion>& basis, int k, long p) {
    long d = (long)basis.size();
    mpz_class pk1;
    mpz_ui_pow_ui(pk1.get_mpz_t(), (unsigned long)p, (unsigned long)(k - 1));
    std::vector<std::vector<mpz_class>> A((size_t)d,
                                          std::vector<mpz_class>((size_t)d));
    for (long j = 1; j <= d; ++j)
        for (long i = 1; i <= d; ++i) {
            mpz_class v = basis[(size_t)j - 1].a[(size_t)(p * i)];
            if (i % p == 0) v += pk1 * basis[(size_t)j - 1].a[(size_t)(i / p)];
            A[(size_t)i - 1][(size_t)j - 1] = v;
        }
    return A;
}

// monic characteristic polynomial by Faddeev-LeVerrier; all divisions exact
std::vector<mpz_class> char_poly(const std::vector<std::vector<mpz_class>>& A) {
    long d = (long)A.size();
    std::vector<mpz_class> c((size_t)d + 1); // c[i] = coeff of lambda^{d-i}
    c[0] = 1;
    std::vector<std::vector<mpz_class>> M = A;
    for (long j = 1; j <= d; ++j) {
        if (j > 1) {
            // M <- A (M + c_{j-1} I)
            std::vector<std::vector<mpz_class>> T = M;
            for (long i = 0; i < d; ++i) T[(size_t)i][(size_t)i] += c[(size_t)j - 1];
            for (long r = 0; r < d; ++r)
                for (long s = 0; s < d; ++s) {
                    mpz_class acc = 0;
                    for (long t = 0; t < d; ++t)
                        acc += A[(size_t)r][(size_t)t] * T[(size_t)t][(size_t)s];
                    M[(size_t)r][(size_t)s] = acc;
                }
        }
        mpz_class tr = 0;
        for (long i = 0; i < d; ++i) tr += M[(size_t)i][(size_t)i];
        mpz_class cj;
        mpz_class mtr = -tr;
        mpz_divexact_ui(cj.get_mpz_t(), mtr.get_mpz_t(), (unsigned long)j);
        c[(size_t)j] = cj;
    }
    return c; // p(x) = sum c[i] x^{d-i}
}

using Poly = std::vector<mpq_class>; // ascending powers, no trailing zeros

Poly trim(Poly p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

Poly poly_derivative(const Poly& p) {
    Poly d;
    for (size_t i = 1; i < p.size(); ++i) d.push_back(mpq_class((long)i) * p[i]);
    return trim(d);
}

Poly poly_neg_rem(Poly a, const Poly& b) {
    while (a.size() >= b.size() && !a.empty()) {
        mpq_class q = a.back() / b.back();
        size_t off = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[off + i] -= q * b[i];
        a = trim(std::move(a));
        if (a.size() >= b.size() && a.size() && a.back() == 0) a.pop_back();
    }
    for (auto& c : a) c = -c;
    return trim(std::move(a));
}

mpq_class poly_eval(const Poly& p, const mpq_class& x) {
    mpq_class v = 0;
    for (size_t i = p.size(); i-- > 0;) v = v * x + p[i];
    return v;
}

int sturm_changes(const std::vector<Poly>& chain, const mpq_class& x) {
    int changes = 0, last = 0;
    for (const auto& p : chain) {
        int s = sgn(poly_eval(p, x));
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

// all real roots of a squarefree monic integer polynomial, isolated by a
// Sturm chain and refined by Newton at escalated precision; returns empty if
// the polynomial has fewer than d distinct real roots (collision => caller
// retries with another Hecke operator)
std::vector<Real> distinct_real_roots(const std::vector<mpz_class>& coeffs,
                                      unsigned digits) {
    long d = (long)coeffs.size() - 1;
    Poly p((size_t)d + 1);
    for (long i = 0; i <= d; ++i) p[(size_t)i] = mpq_class(coeffs[(size_t)(d - i)]);

    std::vector<Poly> chain{p, poly_derivative(p)};
    while (chain.back().size() > 1) {
        Poly r = poly_neg_rem(chain[chain.size() - 2], chain.back());
        if (r.empty()) break;
        chain.push_back(std::move(r));
    }
    // nonconstant gcd(p, p') means a repeated root: report a collision
    if (chain.back().size() > 1) return {};

    // Cauchy bound
    mpq_class R = 1;
    for (long i = 0; i < d; ++i) {
        mpq_class t = abs(p[(size_t)i]);
        if (t > R) R = t;
    }
    R += 1;

    struct Iv {
        mpq_class lo, hi;
        int cnt;
    };
    std::vector<Iv> work{{-R, R, sturm_changes(chain, -R) - sturm_changes(chain, R)}};
    std::vector<std::pair<mpq_class, mpq_class>> isolated;
    while (!work.empty()) {
        Iv iv = work.back();
        work.pop_back();
        if (iv.cnt == 0) continue;
        if (iv.cnt == 1) {
            isolated.emplace_back(iv.lo, iv.hi);
            continue;
        }
        mpq_class mid = (iv.lo + iv.hi) / 2;
        int left = sturm_changes(chain, iv.lo) - sturm_changes(chain, mid);
        work.push_back({iv.lo, mid, left});
        work.push_back({mid, iv.hi, iv.cnt - left});
    }
    if ((long)isolated.size() != d) return {};

    std::vector<Real> roots;
    ScopedDigits guard(digits);
    std::vector<Real> rc((size_t)d + 1);
    for (long i = 0; i <= d; ++i) rc[(size_t)i] = to_real(p[(size_t)i]);
    Real eps = pow(Real(10), -(long)digits + 5);
    for (auto& [lo, hi] : isolated) {
        // shrink by exact sign bisection until Newton is safe
        for (int it = 0; it < 80; ++it) {
            mpq_class mid = (lo + hi) / 2;
            if (sturm_changes(chain, lo) - sturm_changes(chain, mid) == 1)
                hi = mid;
            else
                lo = mid;
        }
        Real x = (to_real(lo) + to_real(hi)) / 2;
        for (int it = 0; it < 200; ++it) {
            Real f = 0, df = 0;
            for (long i = d; i >= 0; --i) {
                df = df * x + f;
                f = f * x + rc[(size_t)i];
            }
            if (df == 0) break;
            Real step = f / df;
            x -= step;
            if (abs(step) <= eps * (1 + abs(x))) break;
        }
        roots.push_back(x);
    }
    std::sort(roots.begin(), roots.end(), [](const Real& a, const Real& b) {
        return a > b;
    });
    return roots;
}

// LU solve with partial pivoting, in place
std::vector<Real> lu_solve(std::vector<std::vector<Real>> M,
                           std::vector<Real> b) {
    long n = (long)M.size();
    for (long col = 0; col < n; ++col) {
        long piv = col;
        for (long r = col + 1; r < n; ++r)
            if (abs(M[(size_t)r][(size_t)col]) > abs(M[(size_t)piv][(size_t)col]))
                piv = r;
        std::swap(M[(size_t)col], M[(size_t)piv]);
        std::swap(b[(size_t)col], b[(size_t)piv]);
        if (M[(size_t)col][(size_t)col] == 0)
            throw precision_failure("lu_solve: singular matrix");
        for (long r = col + 1; r < n; ++r) {
            Real f = M[(size_t)r][(size_t)col] / M[(size_t)col][(size_t)col];
            if (f == 0) continue;
            for (long c2 = col; c2 < n; ++c2)
                M[(size_t)r][(size_t)c2] -= f * M[(size_t)col][(size_t)c2];
            b[(size_t)r] -= f * b[(size_t)col];
        }
    }
    std::vector<Real> x((size_t)n);
    for (long r = n - 1; r >= 0; --r) {
        Real acc = b[(size_t)r];
        for (long c2 = r + 1; c2 < n; ++c2)
            acc -= M[(size_t)r][(size_t)c2] * x[(size_t)c2];
        x[(size_t)r] = acc / M[(size_t)r][(size_t)r];
    }
    return x;
}

} // namespace

mpz_class hecke_t2_trace(int k) {
    long d = dim_cusp_forms(k);
    if (d == 0) return 0;
    auto basis = miller_basis(k, 2 * d);
    auto A = hecke_matrix(basis, k, 2);
    mpz_class tr = 0;
    for (long i = 0; i < d; ++i) tr += A[(size_t)i][(size_t)i];
    return tr;
}

std::vector<HeckeEigenform> hecke_eigenforms(int k, long N) {
    long d = dim_cusp_forms(k);
    std::vector<HeckeEigenform> out;
    if (d == 0) return out;
    long Nb = std::max({N, 3 * d, 2L});
    auto basis = miller_basis(k, Nb);

    unsigned wd = policy().working_digits;
    Real half = Real(k - 1) / 2;

    auto lambda_from = [&](const std::vector<Real>& coeff_of_basis) {
        // a_f(n) = sum_i v_i g_i(n); lambda(n) = a_f(n) / n^{(k-1)/2}
        std::vector<Real> lam((size_t)Nb + 1);
        lam[0] = 0;
        for (long n = 1; n <= Nb; ++n) {
            Real a = 0;
            for (long i = 0; i < d; ++i)
                if (coeff_of_basis[(size_t)i] != 0)
                    a += coeff_of_basis[(size_t)i] *
                         to_real(basis[(size_t)i].a[(size_t)n]);
            lam[(size_t)n] = a / pow(Real(n), half);
        }
        return lam;
    };

    if (d == 1) {
        HeckeEigenform f;
        f.k = k;
        f.lambda.resize((size_t)Nb + 1);
        f.lambda[0] = 0;
        for (long n = 1; n <= Nb; ++n)
            f.lambda[(size_t)n] =
                to_real(basis[0].a[(size_t)n]) / pow(Real(n), half);
        out.push_back(std::move(f));
        return out;
    }

    // transport mixes basis rows of size ~ n^{k-1} down to a(n) ~ n^{k/2},
    // so roughly (k-1)/2 * log10(Nb) digits cancel; escalate accordingly
    unsigned guard_digits =
        wd + (unsigned)((k - 1) * 0.5 * std::log10((double)Nb) + 0.5) + 25;

    for (long p : {2L, 3L}) {
        auto A = hecke_matrix(basis, k, p);
        auto cp = char_poly(A);
        bool ok = false;
        {
            ScopedDigits guard(guard_digits);
            auto thetas = distinct_real_roots(cp, guard_digits);
            if ((long)thetas.size() != d) continue; // collision: next p

            // Real copy of A at escalated precision
            std::vector<std::vector<Real>> Ar((size_t)d,
                                              std::vector<Real>((size_t)d));
            Real anorm = 0;
            for (long i = 0; i < d; ++i)
                for (long j = 0; j < d; ++j) {
                    Ar[(size_t)i][(size_t)j] = to_real(A[(size_t)i][(size_t)j]);
                    Real t = abs(Ar[(size_t)i][(size_t)j]);
                    if (t > anorm) anorm = t;
                }

            for (const Real& th : thetas) {
                // inverse iteration.  theta is accurate enough that A - theta I
                // can round to an exactly singular matrix, so shift by a tiny
                // deliberate perturbation; the solves then converge to the
                // eigenvector with mixing ~ perturbation / eigenvalue gap per
                // iteration, far below the target precision after two rounds
                Real pert = (abs(th) + 1) * pow(Real(10), -(long)guard_digits + 8);
                std::vector<std::vector<Real>> S = Ar;
                for (long i = 0; i < d; ++i)
                    S[(size_t)i][(size_t)i] -= th + pert;
                std::vector<Real> v((size_t)d, Real(1));
                for (int it = 0; it < 2; ++it) {
                    v = lu_solve(S, v);
                    Real mx = 0;
                    for (const Real& c : v) {
                        Real t = abs(c);
                        if (t > mx) mx = t;
                    }
                    for (Real& c : v) c /= mx;
                }
                // residual check ||A v - theta v||_inf (||v||_inf = 1)
                Real resid = 0;
                for (long i = 0; i < d; ++i) {
                    Real r = -th * v[(size_t)i];
                    for (long j = 0; j < d; ++j)
                        r += Ar[(size_t)i][(size_t)j] * v[(size_t)j];
                    Real t = abs(r);
                    if (t > resid) resid = t;
                }
                Real tol = wd >= 40 ? Real("1e-25")
                                    : pow(Real(10), -(long)wd + 15);
                if (resid > tol * anorm)
                    throw precision_failure(
                        "hecke_eigenforms: eigen-residual too large");
                // normalize a_f(1) = v_1 to 1 (echelon basis)
                if (v[0] == 0)
                    throw precision_failure(
                        "hecke_eigenforms: vanishing first coefficient");
                for (long i = d - 1; i >= 0; --i) v[(size_t)i] /= v[0];

                HeckeEigenform hf;
                hf.k = k;
                hf.lambda = lambda_from(v);
                out.push_back(std::move(hf));
            }
            ok = true;
        }
        if (!ok) {
            out.clear();
            continue;
        }
        // back at the caller's precision: trim the guard digits off
        for (auto& f : out)
            for (auto& l : f.lambda) l = round_to_policy(l);
        return out;
    }
    throw precision_failure("hecke_eigenforms: T_2 and T_3 both degenerate");
}

// ---------------------------------------------------------------------------
// Petersson formula right-hand side with a certified Bessel tail.

namespace {

// tail(C) = 2 pi sum_{c>C} |S| / c * |J_{k-1}(4 pi sqrt(mn)/c)|
//        <= 2 pi X^{k-1} sum_{c>C} c^{-(k-1)} / Gamma(k)
//        <= 2 pi X^{k-1} C^{-(k-2)} / (Gamma(k) (k-2)),  X = 2 pi sqrt(mn),
// using |S(m,n;c)| <= c and |J_nu(x)| <= (x/2)^nu / Gamma(nu+1)
Real petersson_log_tail(int k, long m, long n, const Real& C) {
    Real X = 2 * const_pi() * sqrt(Real(m) * n);
    return log(2 * const_pi()) + (k - 1) * log(X) - (k - 2) * log(C) -
           log_gamma(Real(k)) - log(Real(k - 2));
}

const KloostermanBatch& kloosterman_batch(long c) {
    static thread_local std::map<long, std::unique_ptr<KloostermanBatch>> cache;
    static thread_local unsigned cache_digits = 0;
    static thread_local std::unique_ptr<KloostermanBatch> transient;
    unsigned wd = policy().working_digits;
    if (wd != cache_digits) {
        cache.clear();
        cache_digits = wd;
    }
    if (c > 2000) { // keep the memoized tables small
        transient = std::make_unique<KloostermanBatch>(c);
        return *transient;
    }
    auto it = cache.find(c);
    if (it == cache.end())
        it = cache.emplace(c, std::make_unique<KloostermanBatch>(c)).first;
    return *it->second;
}

} // namespace

long petersson_c_max(int k, long m, long n, const Real& tol) {
    if (k < 3 || k % 2) throw std::invalid_argument("petersson_c_max: bad k");
    if (!(tol > 0)) throw std::invalid_argument("petersson_c_max: bad tol");
    Real X = 2 * const_pi() * sqrt(Real(m) * n);
    Real lnC = (log(2 * const_pi()) + (k - 1) * log(X) - log_gamma(Real(k)) -
                log(Real(k - 2)) - log(tol)) /
               (k - 2);
    if (lnC > 34) throw precision_failure("petersson_c_max: tail too heavy");
    long C = std::max(1L, (long)std::ceil(std::exp((double)lnC) + 1e-9));
    while (petersson_log_tail(k, m, n, Real(C)) > log(tol)) ++C;
    return C;
}

Real petersson_rhs(int k, long m, long n, long c_max, const Real& tol) {
    if (k < 4 || k % 2) throw std::invalid_argument("petersson_rhs: bad k");
    if (m < 1 || n < 1 || c_max < 1)
        throw std::invalid_argument("petersson_rhs: bad arguments");
    if (petersson_log_tail(k, m, n, Real(c_max)) > log(tol))
        throw precision_failure("petersson_rhs: tail beyond c_max exceeds tol");

    Real pi = const_pi();
    int ik = (k % 4 == 0) ? 1 : -1; // i^{-k} for even k
    Real sum = (m == n) ? Real(1) : Real(0);

    // cheap double-precision skip bound: per-c term is at most
    // 2 pi (x/2)^{k-1} / Gamma(k); it decreases in c, so once the bound falls
    // below tol/(10 c_max) the remaining c contribute < tol/10 total
    double lskip = std::log((double)tol.convert_to<double>() > 0
                                ? tol.convert_to<double>()
                                : 1e-300) -
                   std::log(10.0 * (double)c_max);
    double lx0 = std::log(2 * 3.141592653589793) +
                 0.5 * std::log((double)m * (double)n);
    for (long c = 1; c <= c_max; ++c) {
        double lb = std::log(2 * 3.141592653589793) +
                    (k - 1) * (lx0 - std::log((double)c)) - std::lgamma((double)k);
        if (lb < lskip) break;
        Real x = 4 * pi * sqrt(Real(m) * n) / c;
        Real S = kloosterman_batch(c)(m, n);
        sum += 2 * pi * ik * S / c * bessel_j(Real(k - 1), x);
    }
    return round_to_policy(sum);
}

Real petersson_rhs_auto(int k, long m, long n) {
    Real tol = Real(policy().target_abs_tol);
    long C = petersson_c_max(k, m, n, tol);
    return petersson_rhs(k, m, n, C, tol);
}

void solve_weights(int k, std::vector<HeckeEigenform>& forms) {
    long d = (long)forms.size();
    if (d == 0) return;
    std::vector<std::vector<Real>> M((size_t)d, std::vector<Real>((size_t)d));
    std::vector<Real> rhs((size_t)d);
    for (long n = 1; n <= d; ++n) {
        for (long f = 0; f < d; ++f) {
            if ((long)forms[(size_t)f].lambda.size() <= n)
                throw std::invalid_argument("solve_weights: lambda too short");
            M[(size_t)n - 1][(size_t)f] = forms[(size_t)f].lambda[(size_t)n];
        }
        rhs[(size_t)n - 1] = petersson_rhs_auto(k, 1, n);
    }
    auto w = lu_solve(std::move(M), std::move(rhs));
    for (long f = 0; f < d; ++f) {
        if (!(w[(size_t)f] > 0))
            throw precision_failure("solve_weights: non-positive weight");
        forms[(size_t)f].w = round_to_policy(w[(size_t)f]);
    }
}

const std::vector<HeckeEigenform>& eigenbasis(int k, long N) {
    struct Entry {
        long N = -1;
        unsigned digits = 0;
        std::vector<HeckeEigenform> forms;
    };
    static thread_local std::map<int, Entry> cache;
    unsigned wd = policy().working_digits;
    auto& e = cache[k];
    if (e.N < N || e.digits != wd) {
        e.forms = hecke_eigenforms(k, N);
        solve_weights(k, e.forms);
        e.N = N;
        e.digits = wd;
    }
    return e.forms;
}

} // namespace ssm
