#pragma once
// Minimal arbitrary-precision complex type. std::complex<Real> is not usable
// here (libstdc++ assumes an IEEE-like value type in several places) and the
// mpc development headers are not available, so we carry our own. Only the
// operations the library actually needs are provided.

#include "ssm/precision.hpp"

namespace ssm {

struct Complex {
    Real re, im;

    Complex() : re(0), im(0) {}
    Complex(const Real& r) : re(r), im(0) {}
    Complex(const Real& r, const Real& i) : re(r), im(i) {}
    Complex(long r) : re(r), im(0) {}
    Complex(int r) : re(r), im(0) {}
    Complex(double r) : re(r), im(0) {}

    bool is_real() const { return im == 0; }

    Complex operator-() const { return {-re, -im}; }

    Complex& operator+=(const Complex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Complex& operator-=(const Complex& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    Complex& operator*=(const Complex& o) {
        Real r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = r;
        return *this;
    }
    Complex& operator/=(const Complex& o);
};

inline Complex operator+(Complex a, const Complex& b) { return a += b; }
inline Complex operator-(Complex a, const Complex& b) { return a -= b; }
inline Complex operator*(Complex a, const Complex& b) { return a *= b; }
Complex operator/(Complex a, const Complex& b);

inline Complex operator+(const Real& a, const Complex& b) { return Complex(a) + b; }
inline Complex operator-(const Real& a, const Complex& b) { return Complex(a) - b; }
inline Complex operator*(const Real& a, const Complex& b) { return Complex(a) * b; }
inline Complex operator/(const Real& a, const Complex& b) { return Complex(a) / b; }

inline bool operator==(const Complex& a, const Complex& b) {
    return a.re == b.re && a.im == b.im;
}

inline Complex conj(const Complex& z) { return {z.re, -z.im}; }
inline Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }
Real abs(const Complex& z);
Real arg(const Complex& z); // atan2 convention, in (-pi, pi]

Complex exp(const Complex& z);
Complex log(const Complex& z); // principal branch
Complex sqrt(const Complex& z);
Complex sin(const Complex& z);
Complex cos(const Complex& z);
Complex pow(const Complex& a, const Complex& b); // exp(b log a), principal
Complex pow(const Real& a, const Complex& b);    // a > 0

// log(1+z), accurate for small |z|
Complex log1p(const Complex& z);

// e(x) = exp(2 pi i x)
Complex unit_e(const Real& x);

inline Complex lift_precision(const Complex& z) {
    return Complex(lift_precision(z.re), lift_precision(z.im));
}

} // namespace ssm
