#pragma once

#include <array>
#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace flexkit {

// Exact rational scalar. Backed by GMP's mpq_class, which keeps every value
// in lowest terms with a positive denominator.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long num) : v_(num) {}
    Rational(long num, unsigned long den) : v_(num, den) { v_.canonicalize(); }
    explicit Rational(const std::string& text) : v_(text) { v_.canonicalize(); }

    Rational operator+(const Rational& o) const { return Rational(v_ + o.v_); }
    Rational operator-(const Rational& o) const { return Rational(v_ - o.v_); }
    Rational operator*(const Rational& o) const { return Rational(v_ * o.v_); }
    Rational operator/(const Rational& o) const { return Rational(v_ / o.v_); }
    Rational operator-() const { return Rational(-v_); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }

    bool operator==(const Rational& o) const { return v_ == o.v_; }
    bool operator!=(const Rational& o) const { return v_ != o.v_; }
    bool operator<(const Rational& o) const { return v_ < o.v_; }
    bool operator>(const Rational& o) const { return v_ > o.v_; }

    double to_double() const { return v_.get_d(); }
    std::string str() const { return v_.get_str(); }

private:
    explicit Rational(mpq_class v) : v_(std::move(v)) {}
    mpq_class v_;
};

template <std::size_t N>
using RationalVec = std::array<Rational, N>;

using Rational2Vec = RationalVec<2>;
using Rational4Vec = RationalVec<4>;

template <std::size_t N>
RationalVec<N> operator+(const RationalVec<N>& a, const RationalVec<N>& b) {
    RationalVec<N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = a[i] + b[i];
    return out;
}

template <std::size_t N>
RationalVec<N> operator-(const RationalVec<N>& a, const RationalVec<N>& b) {
    RationalVec<N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = a[i] - b[i];
    return out;
}

template <std::size_t N>
RationalVec<N> operator*(const Rational& c, const RationalVec<N>& a) {
    RationalVec<N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = c * a[i];
    return out;
}

template <std::size_t N>
Rational dot(const RationalVec<N>& a, const RationalVec<N>& b) {
    Rational s;
    for (std::size_t i = 0; i < N; ++i) s += a[i] * b[i];
    return s;
}

template <std::size_t N>
Rational norm_sq(const RationalVec<N>& a) {
    return dot(a, a);
}

}  // namespace flexkit
