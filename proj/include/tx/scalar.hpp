#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace tx {

// Session-wide coefficient field. Q unless a prime has been installed.
// Set it once, before any Scalar is built; values from different fields must not mix.
struct Field {
    static void use_rationals();
    static void use_prime(int64_t p);
    static int64_t prime();          // 0 for Q
    static std::string name();       // "Q" or "F_p"
    static int64_t characteristic() { return prime(); }
};

class Scalar {
public:
    Scalar() = default;
    Scalar(int v) : Scalar(static_cast<long long>(v)) {}
    Scalar(long v) : Scalar(static_cast<long long>(v)) {}
    Scalar(long long v);
    Scalar(long long num, long long den);

    Scalar(const Scalar& o) : n_(o.n_), d_(o.d_) {
        if (o.big_) big_ = std::make_unique<mpq_class>(*o.big_);
    }
    Scalar(Scalar&&) noexcept = default;
    Scalar& operator=(const Scalar& o) {
        if (this != &o) {
            n_ = o.n_;
            d_ = o.d_;
            big_ = o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr;
        }
        return *this;
    }
    Scalar& operator=(Scalar&&) noexcept = default;

    // Accepts "p", "-p", "p/q". Throws ParseError on malformed input or zero denominator.
    static Scalar parse(std::string_view text);

    bool is_zero() const { return !big_ && n_ == 0; }
    bool is_one() const { return !big_ && n_ == 1 && d_ == 1; }
    bool is_small() const { return !big_; }
    int sign() const;

    Scalar operator-() const;
    Scalar inv() const;

    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    friend bool operator==(const Scalar& a, const Scalar& b);
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    // a += b*c without a temporary in the common small case
    void add_mul(const Scalar& b, const Scalar& c);

    std::string str() const;

private:
    mpq_class to_mpq() const;
    void set_mpq(const mpq_class& q);
    void set_small(__int128 num, __int128 den);

    int64_t n_ = 0;
    int64_t d_ = 1;
    std::unique_ptr<mpq_class> big_;
};

// (-1)^k
inline int sgn_pow(long long k) { return (k % 2 == 0) ? 1 : -1; }

}  // namespace tx
