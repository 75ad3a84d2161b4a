#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>

#include "pnf/errors.hpp"

namespace pnf {

using Rational = mpq_class;

/// Gaussian rational a + b·i with exact arithmetic. This is the coefficient
/// field of every jet in the project; equality is decidable and no operation
/// ever rounds.
struct Scalar {
    Rational re, im;

    Scalar() : re(0), im(0) {}
    Scalar(long v) : re(v), im(0) {}  // NOLINT: implicit by design
    // mpq_class leaves caller-built fractions uncanonicalized; exact equality
    // requires canonical form, so normalize on entry.
    Scalar(Rational r) : re(std::move(r)), im(0) { re.canonicalize(); }
    Scalar(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {
        re.canonicalize();
        im.canonicalize();
    }
    Scalar(long num, long den) : re(num, den), im(0) { re.canonicalize(); }

    static Scalar i() { return Scalar(Rational(0), Rational(1)); }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }
    bool is_one() const { return re == 1 && sgn(im) == 0; }

    Scalar conj() const { return Scalar(re, -im); }

    /// |z|^2 = re^2 + im^2, an exact rational.
    Rational norm2() const { return re * re + im * im; }

    Scalar operator-() const { return Scalar(-re, -im); }

    Scalar& operator+=(const Scalar& o) { re += o.re; im += o.im; return *this; }
    Scalar& operator-=(const Scalar& o) { re -= o.re; im -= o.im; return *this; }
    Scalar& operator*=(const Scalar& o) {
        Rational r = re * o.re - im * o.im;
        Rational i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    Scalar& operator/=(const Scalar& o) {
        if (o.is_zero()) fail(ErrorKind::domain, "division by zero scalar");
        Rational n2 = o.norm2();
        Rational r = (re * o.re + im * o.im) / n2;
        Rational i = (im * o.re - re * o.im) / n2;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
    friend bool operator==(const Scalar& a, const Scalar& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    /// Human-readable form, e.g. "3/2", "i", "1/2-3/4i".
    std::string str() const;

    /// Parses the forms emitted by str(), plus plain integers: "3", "-1/2",
    /// "i", "-i", "2i", "1/2+3/4i", "1-2i". Throws a parse error otherwise.
    static Scalar parse(const std::string& s);
};

std::string rational_str(const Rational& r);
Rational parse_rational(const std::string& s);

std::ostream& operator<<(std::ostream& os, const Scalar& s);

}  // namespace pnf
