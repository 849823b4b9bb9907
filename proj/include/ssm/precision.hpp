#pragma once
// Runtime-precision real numbers on top of MPFR, plus the policy object that
// every approximate operation in the library reads its tolerances from.

#include <boost/multiprecision/mpfr.hpp>
#include <stdexcept>
#include <string>

namespace ssm {

using Real = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<0>,
    boost::multiprecision::et_off>;

// Tolerance knobs shared by all quadratures / series truncations.
// working_digits is the decimal precision newly constructed Reals get.
struct PrecisionPolicy {
    unsigned working_digits = 50;
    double target_abs_tol = 1e-30;
    double target_rel_tol = 1e-30;
};

PrecisionPolicy& policy();                 // thread-local active policy
void set_policy(const PrecisionPolicy& p); // also updates Real default precision
void set_working_digits(unsigned digits);

// RAII escalation: bump the working precision inside a scope, restore on exit.
// Results computed inside should be rounded back by the caller (assigning to a
// Real constructed outside keeps the outer precision in boost.multiprecision
// only on explicit round; use round_to_policy below when it matters).
class ScopedDigits {
  public:
    explicit ScopedDigits(unsigned digits);
    ~ScopedDigits();
    ScopedDigits(const ScopedDigits&) = delete;
    ScopedDigits& operator=(const ScopedDigits&) = delete;

  private:
    unsigned saved_;
};

// Round x to the precision of the active policy (used when leaving an
// escalated scope so stored results are reproducible at the nominal digits).
Real round_to_policy(const Real& x);

// Copy x into a fresh Real at the *current* default precision.  Needed
// because boost 1.74 propagates the precision of the source operands through
// arithmetic: without this, values captured before a ScopedDigits escalation
// would silently drag every computation seeded from them back down to the
// outer precision.  Call it on all inputs at the top of an escalated scope.
Real lift_precision(const Real& x);

struct precision_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct pole_error : std::domain_error {
    using std::domain_error::domain_error;
};
struct contour_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Constants at the current working precision (recomputed per call; MPFR
// caches internally, this is cheap).
Real const_pi();
Real const_euler(); // Euler-Mascheroni gamma
Real const_ln2();

// Machine-independent decimal formatting at full working precision.
std::string format_real(const Real& x, int digits = -1);

} // namespace ssm
