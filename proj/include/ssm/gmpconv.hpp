#pragma once
// exact GMP integer/rational -> working-precision Real conversions

#include "ssm/precision.hpp"

#include <gmpxx.h>
#include <mpfr.h>

namespace ssm {

inline Real to_real(const mpz_class& z) {
    Real r;
    mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
    return r;
}

inline Real to_real(const mpq_class& q) {
    Real r;
    mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
    return r;
}

} // namespace ssm
