#ifndef DRLAB_RATIONAL_HPP
#define DRLAB_RATIONAL_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace drlab {

using Rat = mpq_class;

struct arithmetic_error : std::runtime_error {
    explicit arithmetic_error(const std::string& what) : std::runtime_error(what) {}
};

// Element of Q(i): re + im*I with exact rational components.
// mpq_class keeps both components in lowest terms with positive denominators.
struct GaussianRational {
    Rat re, im;

    GaussianRational() : re(0), im(0) {}
    GaussianRational(long n) : re(n), im(0) {}
    GaussianRational(const Rat& r) : re(r), im(0) {}
    GaussianRational(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
    GaussianRational(long num, long den) : re(num, den), im(0) { re.canonicalize(); }

    static GaussianRational i() { return GaussianRational(Rat(0), Rat(1)); }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    GaussianRational conj() const { return {re, -im}; }

    // |z|^2 as a rational
    Rat norm2() const { return re * re + im * im; }

    GaussianRational operator-() const { return {-re, -im}; }

    GaussianRational& operator+=(const GaussianRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        Rat r = re * o.re - im * o.im;
        Rat i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o) {
        if (o.is_zero()) throw arithmetic_error("division by zero in Q(i)");
        Rat n2 = o.norm2();
        Rat r = (re * o.re + im * o.im) / n2;
        Rat i = (im * o.re - re * o.im) / n2;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

    // Text form `a/b + c/d*I`; zero parts omitted, `0` for zero.
    std::string str() const;
};

using GQ = GaussianRational;

// Parse the text form produced by GaussianRational::str().
GaussianRational parse_gq(const std::string& text);

// Exact Bernoulli number B_n with the convention B_1 = -1/2.
Rat bernoulli(unsigned n);

std::string rat_str(const Rat& r);

}  // namespace drlab

#endif
