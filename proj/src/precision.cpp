#include "ssm/precision.hpp"

#include <mpfr.h>

#include <cstdio>
#include <vector>

namespace ssm {

static thread_local PrecisionPolicy g_policy = [] {
    Real::default_precision(50);
    return PrecisionPolicy{};
}();

PrecisionPolicy& policy() { return g_policy; }

// Touch the thread-local policy during static initialization so the mpfr
// default precision is already 50 digits when main() starts constructing
// Reals; without this, Reals built before the first library call silently
// get boost's own (much lower) startup default.
static struct PolicyEagerInit {
    PolicyEagerInit() { policy(); }
} g_policy_eager_init;

void set_policy(const PrecisionPolicy& p) {
    if (p.working_digits < 30)
        throw std::invalid_argument("working_digits must be >= 30");
    if (!(p.target_abs_tol > 0) || !(p.target_rel_tol > 0))
        throw std::invalid_argument("tolerances must be positive");
    g_policy = p;
    Real::default_precision(p.working_digits);
}

void set_working_digits(unsigned digits) {
    PrecisionPolicy p = g_policy;
    p.working_digits = digits;
    set_policy(p);
}

ScopedDigits::ScopedDigits(unsigned digits) : saved_(g_policy.working_digits) {
    if (digits > saved_) {
        g_policy.working_digits = digits;
        Real::default_precision(digits);
    }
}

ScopedDigits::~ScopedDigits() {
    g_policy.working_digits = saved_;
    Real::default_precision(saved_);
}

Real round_to_policy(const Real& x) {
    // Go through mpfr directly: assignment semantics for variable-precision
    // numbers changed across boost versions, this is unambiguous.
    auto bits = (mpfr_prec_t)(g_policy.working_digits * 3.3219280948873623) + 8;
    Real y;
    mpfr_set_prec(y.backend().data(), bits);
    mpfr_set(y.backend().data(), x.backend().data(), MPFR_RNDN);
    return y;
}

Real lift_precision(const Real& x) {
    Real y; // default-constructed at the current default precision
    mpfr_set(y.backend().data(), x.backend().data(), MPFR_RNDN);
    return y;
}

Real const_pi() {
    Real x;
    mpfr_const_pi(x.backend().data(), MPFR_RNDN);
    return x;
}

Real const_euler() {
    Real x;
    mpfr_const_euler(x.backend().data(), MPFR_RNDN);
    return x;
}

Real const_ln2() {
    Real x;
    mpfr_const_log2(x.backend().data(), MPFR_RNDN);
    return x;
}

std::string format_real(const Real& x, int digits) {
    if (digits < 0) digits = (int)g_policy.working_digits;
    // mpfr_snprintf gives locale-independent, deterministic text.
    int need = mpfr_snprintf(nullptr, 0, "%.*Re", digits, x.backend().data());
    std::vector<char> buf(need + 1);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Re", digits, x.backend().data());
    return std::string(buf.data());
}

} // namespace ssm
