#pragma once

#include <cstdint>

#include "chequenet/errors.hpp"

namespace chequenet::detail {

using uint128 = unsigned __int128;

inline uint128 gcd128(uint128 a, uint128 b) {
    while (b != 0) {
        uint128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Checked multiply; betweenness scores are kept exact, so running out of
// 128 bits is an error rather than a silent precision loss.
inline uint128 mul128(uint128 a, uint128 b) {
    if (a != 0 && b > static_cast<uint128>(-1) / a)
        throw infeasible("exact rational overflow: path counts exceed 128-bit range");
    return a * b;
}

// Non-negative rational with a 128-bit numerator and denominator, always
// kept in lowest terms. Enough head-room for shortest-path dependency
// accumulation on the sparse networks this library targets.
class Rational {
public:
    Rational() = default;
    Rational(uint128 num, uint128 den) : num_(num), den_(den) { reduce(); }

    static Rational from_integer(std::uint64_t v) { return Rational(v, 1); }

    Rational& operator+=(const Rational& o) {
        uint128 g = gcd128(den_, o.den_);
        uint128 lhs = mul128(num_, o.den_ / g);
        uint128 rhs = mul128(o.num_, den_ / g);
        if (lhs > static_cast<uint128>(-1) - rhs)
            throw infeasible("exact rational overflow: path counts exceed 128-bit range");
        num_ = lhs + rhs;
        den_ = mul128(den_ / g, o.den_);
        reduce();
        return *this;
    }

    Rational operator*(const Rational& o) const {
        uint128 g1 = gcd128(num_, o.den_);
        uint128 g2 = gcd128(o.num_, den_);
        Rational r;
        r.num_ = mul128(num_ / g1, o.num_ / g2);
        r.den_ = mul128(den_ / g2, o.den_ / g1);
        return r;
    }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }

    uint128 numerator() const { return num_; }
    uint128 denominator() const { return den_; }

    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

private:
    void reduce() {
        if (num_ == 0) {
            den_ = 1;
            return;
        }
        uint128 g = gcd128(num_, den_);
        num_ /= g;
        den_ /= g;
    }

    uint128 num_ = 0;
    uint128 den_ = 1;
};

} // namespace chequenet::detail
