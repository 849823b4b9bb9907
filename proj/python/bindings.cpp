// Thin Python face for the moment machinery.  Values cross the boundary as
// doubles (plenty for plotting and sanity work); anyone who needs the full
// multiprecision digits gets them as decimal strings from moment_report.
#include "ssm/asymptotics.hpp"
#include "ssm/lvalues.hpp"
#include "ssm/modforms.hpp"
#include "ssm/precision.hpp"
#include "ssm/specfun.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ssm;

namespace {

double as_double(const Real& x) { return x.convert_to<double>(); }

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "first moment of central symmetric-square L-values";

    m.def("set_working_digits", &set_working_digits,
          "set the thread's working precision (decimal digits, >= 30)");
    m.def("working_digits", [] { return policy().working_digits; });
    m.def("policy_fingerprint", &policy_fingerprint);

    m.def(
        "dirichlet_l_half",
        [](long D) {
            return as_double(
                dirichlet_l(Complex(Real(1) / 2), quadratic_character(D)).re);
        },
        py::arg("D"), "L(1/2, chi_D) for a quadratic discriminant D");

    m.def("m1", [](int k) { return as_double(m1(k)); }, py::arg("k"));
    m.def("m_minus4", [](int k) { return as_double(m_minus4(k)); }, py::arg("k"));
    m.def("m_minus3", [](int k) { return as_double(m_minus3(k)); }, py::arg("k"));
    m.def("m_minus3_prime", [](int k) { return as_double(m_minus3_prime(k)); },
          py::arg("k"));
    m.def("s_of_k", &s_of_k, py::arg("k"));
    m.def("moment_rhs", [](int k) { return as_double(moment_rhs(k)); },
          py::arg("k"));
    m.def("moment_lhs", [](int k) { return as_double(moment_lhs(k)); },
          py::arg("k"),
          "Petersson-weighted sum of L(1/2, sym^2 f) over the weight-k "
          "eigenbasis (the slow side)");
    m.def("dim_cusp_forms", &dim_cusp_forms, py::arg("k"));

    m.def(
        "moment_report",
        [](int k) {
            MomentReport r = moment_report(k);
            unsigned d = policy().working_digits;
            py::dict out;
            out["k"] = r.k;
            out["lhs"] = format_real(r.lhs, d);
            out["m1"] = format_real(r.m1, d);
            out["m_minus4"] = format_real(r.m_minus4, d);
            out["m_minus3"] = format_real(r.m_minus3, d);
            out["residual"] = format_real(r.residual, d);
            out["runtime_seconds"] = r.runtime_seconds;
            out["fingerprint"] = r.fingerprint;
            return out;
        },
        py::arg("k"),
        "full-precision report: both sides of the asymptotic as decimal "
        "strings, plus the residual");
}
