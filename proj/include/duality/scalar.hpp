#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace duality {

using Rational = mpq_class;
using Complex = std::complex<double>;

// p + q i with p, q rational.
class GaussRational {
public:
    GaussRational() = default;
    GaussRational(long v) : re_(v) {}
    GaussRational(int v) : re_(v) {}
    GaussRational(Rational re) : re_(std::move(re)) { re_.canonicalize(); }
    GaussRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
        re_.canonicalize();
        im_.canonicalize();
    }

    static GaussRational i() { return {Rational(0), Rational(1)}; }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }

    GaussRational conj() const { return {re_, -im_}; }

    GaussRational& operator+=(const GaussRational& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    GaussRational& operator-=(const GaussRational& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    GaussRational& operator*=(const GaussRational& o) {
        Rational r = re_ * o.re_ - im_ * o.im_;
        Rational m = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(m);
        return *this;
    }
    GaussRational& operator/=(const GaussRational& o) {
        Rational d = o.re_ * o.re_ + o.im_ * o.im_;
        if (sgn(d) == 0) throw std::domain_error("division by zero");
        Rational r = (re_ * o.re_ + im_ * o.im_) / d;
        Rational m = (im_ * o.re_ - re_ * o.im_) / d;
        re_ = std::move(r);
        im_ = std::move(m);
        return *this;
    }

    friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
    friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
    friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
    friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
    friend GaussRational operator-(const GaussRational& a) { return {-a.re_, -a.im_}; }
    friend bool operator==(const GaussRational& a, const GaussRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussRational& a, const GaussRational& b) { return !(a == b); }

    Complex to_complex() const { return {re_.get_d(), im_.get_d()}; }

    friend std::ostream& operator<<(std::ostream& os, const GaussRational& z) {
        if (z.is_real()) return os << z.re_;
        if (sgn(z.re_) == 0) return os << z.im_ << "i";
        return os << "(" << z.re_ << (sgn(z.im_) > 0 ? "+" : "") << z.im_ << "i)";
    }

private:
    Rational re_{0};
    Rational im_{0};
};

// Uniform access for the two scalar fields used throughout.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<GaussRational> {
    static constexpr bool exact = true;
    static GaussRational from_rational(const Rational& q) { return GaussRational(q); }
    static GaussRational from_int(long v) { return GaussRational(v); }
    static GaussRational imag_unit() { return GaussRational::i(); }
    static bool is_zero(const GaussRational& s) { return s.is_zero(); }
    static GaussRational conj(const GaussRational& s) { return s.conj(); }
    static Complex to_complex(const GaussRational& s) { return s.to_complex(); }
    static double abs(const GaussRational& s) { return std::abs(s.to_complex()); }
};

template <>
struct ScalarTraits<Complex> {
    static constexpr bool exact = false;
    static Complex from_rational(const Rational& q) { return {q.get_d(), 0.0}; }
    static Complex from_int(long v) { return {static_cast<double>(v), 0.0}; }
    static Complex imag_unit() { return {0.0, 1.0}; }
    static bool is_zero(const Complex& s) { return s == Complex(0.0, 0.0); }
    static Complex conj(const Complex& s) { return std::conj(s); }
    static Complex to_complex(const Complex& s) { return s; }
    static double abs(const Complex& s) { return std::abs(s); }
};

template <class S>
bool is_zero(const S& s) { return ScalarTraits<S>::is_zero(s); }

template <class S>
S from_rational(const Rational& q) { return ScalarTraits<S>::from_rational(q); }

template <class S>
S from_int(long v) { return ScalarTraits<S>::from_int(v); }

template <class S>
S imag_unit() { return ScalarTraits<S>::imag_unit(); }

template <class S>
double magnitude(const S& s) { return ScalarTraits<S>::abs(s); }

template <class S>
inline constexpr bool is_exact_v = ScalarTraits<S>::exact;

// Parses "p/q", "p", or a decimal such as "0.75" into an exact rational.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto strip = [](std::string v) {
        while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.erase(v.begin());
        while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.pop_back();
        return v;
    };
    s = strip(s);
    if (s.empty()) throw std::invalid_argument("empty rational");
    auto dot = s.find('.');
    Rational q;
    try {
        if (dot != std::string::npos && s.find('/') == std::string::npos) {
            std::string digits = s.substr(0, dot) + s.substr(dot + 1);
            std::string den = "1" + std::string(s.size() - dot - 1, '0');
            if (digits == "-" || digits.empty()) throw std::invalid_argument(s);
            q = Rational(mpz_class(digits, 10), mpz_class(den, 10));
        } else {
            if (s.front() == '+') s.erase(s.begin());
            q = Rational(s, 10);
        }
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("not a rational: " + std::string(text));
    }
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace duality
