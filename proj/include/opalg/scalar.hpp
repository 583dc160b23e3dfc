#ifndef OPALG_SCALAR_HPP
#define OPALG_SCALAR_HPP

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace opalg {

/// Thrown on malformed user input (bad JSON, bad dimensions, bad text forms).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an identity that is guaranteed by theory fails to verify.
/// Reaching this is always a bug (or a disproved theorem).
class InternalError : public std::runtime_error {
public:
    explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

using Rat = mpq_class;

/// Gaussian rational: complex number with exact rational real and imaginary
/// parts. The only scalar type of the workbench; no floating point exists in
/// any verdict path.
struct Scalar {
    Rat re;
    Rat im;

    Scalar() : re(0), im(0) {}
    Scalar(long n) : re(n), im(0) {}          // NOLINT: implicit by design
    Scalar(Rat r) : re(std::move(r)), im(0) {}
    Scalar(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

    static Scalar i() { return Scalar(Rat(0), Rat(1)); }

    bool isZero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool isOne() const { return re == 1 && sgn(im) == 0; }
    bool isReal() const { return sgn(im) == 0; }

    Scalar conj() const { return Scalar(re, -im); }

    /// |z|^2 = re^2 + im^2, an exact nonnegative rational.
    Rat norm2() const { return re * re + im * im; }

    Scalar inverse() const {
        if (isZero()) throw InputError("Scalar: division by zero");
        Rat n = norm2();
        return Scalar(re / n, -im / n);
    }

    Scalar operator-() const { return Scalar(-re, -im); }

    Scalar& operator+=(const Scalar& o) { re += o.re; im += o.im; return *this; }
    Scalar& operator-=(const Scalar& o) { re -= o.re; im -= o.im; return *this; }
    Scalar& operator*=(const Scalar& o) {
        Rat r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }

    friend Scalar operator+(Scalar a, const Scalar& b) { a += b; return a; }
    friend Scalar operator-(Scalar a, const Scalar& b) { a -= b; return a; }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        return Scalar(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    /// Total order used only for canonical sorting, not a field order.
    int cmpTotal(const Scalar& o) const {
        int c = cmp(re, o.re);
        if (c != 0) return c;
        return cmp(im, o.im);
    }
    friend bool operator<(const Scalar& a, const Scalar& b) { return a.cmpTotal(b) < 0; }

    /// Canonical text form: "a/b", "c/di" or "a/b+c/di", lowest terms.
    std::string str() const;

    /// Parses the text form; signs allowed, lowest terms not required.
    static Scalar parse(const std::string& text);
};

std::string ratStr(const Rat& r);
Rat parseRat(const std::string& text);

} // namespace opalg

#endif
