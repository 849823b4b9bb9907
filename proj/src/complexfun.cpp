#include "ssm/complex.hpp"

#include <boost/multiprecision/mpfr.hpp>

namespace ssm {

using boost::multiprecision::atan2;
using boost::multiprecision::cos;
using boost::multiprecision::cosh;
using boost::multiprecision::exp;
using boost::multiprecision::hypot;
using boost::multiprecision::log;
using boost::multiprecision::log1p;
using boost::multiprecision::sin;
using boost::multiprecision::sinh;
using boost::multiprecision::sqrt;

Complex& Complex::operator/=(const Complex& o) {
    // Smith's algorithm: no overflow issues at these exponent ranges, plain
    // normalization is fine.
    Real d = o.re * o.re + o.im * o.im;
    Real r = (re * o.re + im * o.im) / d;
    im = (im * o.re - re * o.im) / d;
    re = r;
    return *this;
}

Complex operator/(Complex a, const Complex& b) { return a /= b; }

Real abs(const Complex& z) { return hypot(z.re, z.im); }

Real arg(const Complex& z) { return atan2(z.im, z.re); }

Complex exp(const Complex& z) {
    Real m = exp(z.re);
    return {m * cos(z.im), m * sin(z.im)};
}

Complex log(const Complex& z) {
    return {log(abs(z)), atan2(z.im, z.re)};
}

Complex log1p(const Complex& z) {
    // |z| small: log(1+z) with the real part via log1p of the radius-squared
    Real n = z.re * (2 + z.re) + z.im * z.im; // |1+z|^2 - 1
    return {log1p(n) / 2, atan2(z.im, 1 + z.re)};
}

Complex sqrt(const Complex& z) {
    if (z.im == 0 && z.re >= 0) return {sqrt(z.re), Real(0)};
    Real m = abs(z);
    Real u = sqrt((m + z.re) / 2);
    Real v = sqrt((m - z.re) / 2);
    if (z.im < 0) v = -v;
    return {u, v};
}

Complex sin(const Complex& z) {
    return {sin(z.re) * cosh(z.im), cos(z.re) * sinh(z.im)};
}

Complex cos(const Complex& z) {
    return {cos(z.re) * cosh(z.im), -sin(z.re) * sinh(z.im)};
}

Complex pow(const Complex& a, const Complex& b) {
    if (a.re == 0 && a.im == 0) return Complex(0);
    return exp(b * log(a));
}

Complex pow(const Real& a, const Complex& b) {
    Real la = log(a);
    return exp(Complex(b.re * la, b.im * la));
}

Complex unit_e(const Real& x) {
    Real t = 2 * const_pi() * x;
    return {cos(t), sin(t)};
}

} // namespace ssm
