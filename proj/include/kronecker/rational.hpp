#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace kronecker {

__extension__ using int128 = __int128;

/// Exact rational with 64-bit numerator/denominator, always reduced, den > 0.
/// Intermediate products are formed in 128 bits and overflow throws.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(implicit)
    Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return make(static_cast<int128>(a.num_) * b.den_ + static_cast<int128>(b.num_) * a.den_,
                    static_cast<int128>(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make(static_cast<int128>(a.num_) * b.num_, static_cast<int128>(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
        return make(static_cast<int128>(a.num_) * b.den_, static_cast<int128>(a.den_) * b.num_);
    }
    Rational operator-() const { return Rational(-num_, den_); }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
        os << r.num_;
        if (r.den_ != 1) os << '/' << r.den_;
        return os;
    }

private:
    static Rational make(int128 n, int128 d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        int128 a = n < 0 ? -n : n, b = d;
        while (b != 0) { int128 t = a % b; a = b; b = t; }
        if (a > 1) { n /= a; d /= a; }
        constexpr int128 lim = static_cast<int128>(INT64_MAX);
        if (n > lim || n < -lim || d > lim) throw std::overflow_error("Rational: overflow");
        Rational r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }
    void assign(std::int64_t n, std::int64_t d) { *this = make(n, d); }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// Bernoulli numbers B_0..B_n (convention B_1 = -1/2), exact.
inline std::vector<Rational> bernoulli_numbers(int n) {
    std::vector<Rational> b(static_cast<std::size_t>(n) + 1);
    b[0] = 1;
    for (int m = 1; m <= n; ++m) {
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        Rational acc = 0;
        std::int64_t binom = 1;  // C(m+1, k)
        for (int k = 0; k < m; ++k) {
            acc += Rational(binom) * b[static_cast<std::size_t>(k)];
            binom = binom * (m + 1 - k) / (k + 1);
        }
        b[static_cast<std::size_t>(m)] = -acc / Rational(m + 1);
    }
    return b;
}

}  // namespace kronecker
