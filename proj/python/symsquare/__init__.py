"""First moment of central values of symmetric-square L-functions.

The heavy lifting lives in the C++ extension; this package just re-exports
it and adds a convenience wrapper for sweeping a weight range.
"""

from ._core import (
    dim_cusp_forms,
    dirichlet_l_half,
    m1,
    m_minus3,
    m_minus3_prime,
    m_minus4,
    moment_lhs,
    moment_report,
    moment_rhs,
    policy_fingerprint,
    s_of_k,
    set_working_digits,
    working_digits,
)

__all__ = [
    "dim_cusp_forms",
    "dirichlet_l_half",
    "m1",
    "m_minus3",
    "m_minus3_prime",
    "m_minus4",
    "moment_lhs",
    "moment_report",
    "moment_rhs",
    "moment_sweep",
    "policy_fingerprint",
    "s_of_k",
    "set_working_digits",
    "working_digits",
]


def moment_sweep(k_min=12, k_max=40):
    """moment_report for each even weight in [k_min, k_max]."""
    if k_min % 2 or k_max % 2 or not 12 <= k_min <= k_max:
        raise ValueError("need even 12 <= k_min <= k_max")
    return [moment_report(k) for k in range(k_min, k_max + 1, 2)]
