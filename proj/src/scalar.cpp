#include "tx/scalar.hpp"
#include "tx/errors.hpp"

#include <atomic>
#include <cctype>

namespace tx {

namespace {

std::atomic<int64_t> g_prime{0};

using u128 = unsigned __int128;
using i128 = __int128;

u128 uabs(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

u128 gcd128(u128 a, u128 b) {
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool fits64(i128 v) { return v >= INT64_MIN && v <= INT64_MAX; }

int64_t mod_p(i128 v, int64_t p) {
    i128 r = v % p;
    if (r < 0) r += p;
    return static_cast<int64_t>(r);
}

int64_t inv_mod(int64_t a, int64_t p) {
    int64_t t = 0, nt = 1, r = p, nr = a;
    while (nr != 0) {
        int64_t q = r / nr;
        int64_t tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (t < 0) t += p;
    return t;
}

mpz_class from_i128(i128 v) {
    bool neg = v < 0;
    u128 u = uabs(v);
    mpz_class hi = static_cast<unsigned long>(static_cast<uint64_t>(u >> 64));
    mpz_class lo = static_cast<unsigned long>(static_cast<uint64_t>(u));
    mpz_class r = (hi << 64) + lo;
    return neg ? mpz_class(-r) : r;
}

}  // namespace

void Field::use_rationals() { g_prime = 0; }

void Field::use_prime(int64_t p) {
    if (p < 2 || p > (int64_t(1) << 31)) throw ParseError("prime out of supported range: " + std::to_string(p));
    for (int64_t q = 2; q * q <= p; ++q)
        if (p % q == 0) throw ParseError("not a prime: " + std::to_string(p));
    g_prime = p;
}

int64_t Field::prime() { return g_prime.load(std::memory_order_relaxed); }

std::string Field::name() {
    int64_t p = prime();
    return p == 0 ? std::string("Q") : "F_" + std::to_string(p);
}

Scalar::Scalar(long long v) {
    int64_t p = Field::prime();
    if (p) {
        n_ = mod_p(v, p);
        d_ = 1;
    } else {
        n_ = v;
        d_ = 1;
    }
}

Scalar::Scalar(long long num, long long den) {
    if (den == 0) throw ParseError("zero denominator");
    int64_t p = Field::prime();
    if (p) {
        int64_t dn = mod_p(den, p);
        if (dn == 0) throw ParseError("denominator divisible by field characteristic");
        n_ = mod_p(static_cast<i128>(mod_p(num, p)) * inv_mod(dn, p), p);
        d_ = 1;
        return;
    }
    set_small(num, den);
}

Scalar Scalar::parse(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw ParseError("empty rational");
    auto slash = s.find('/');
    auto check_int = [&](const std::string& part) {
        size_t i = 0;
        if (i < part.size() && (part[i] == '-' || part[i] == '+')) ++i;
        if (i == part.size()) throw ParseError("malformed rational \"" + std::string(text) + "\"");
        for (; i < part.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(part[i])))
                throw ParseError("malformed rational \"" + std::string(text) + "\"");
    };
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    check_int(num);
    check_int(den);
    mpz_class zn(num[0] == '+' ? num.substr(1) : num, 10);
    mpz_class zd(den[0] == '+' ? den.substr(1) : den, 10);
    if (zd == 0) throw ParseError("zero denominator in \"" + std::string(text) + "\"");
    Scalar r;
    int64_t p = Field::prime();
    if (p) {
        mpz_class pn = zn % p, pd = zd % p;
        if (pn < 0) pn += p;
        if (pd < 0) pd += p;
        if (pd == 0) throw ParseError("denominator divisible by field characteristic");
        r.n_ = mod_p(static_cast<i128>(pn.get_si()) * inv_mod(pd.get_si(), p), p);
        r.d_ = 1;
        return r;
    }
    mpq_class q(zn, zd);
    q.canonicalize();
    r.set_mpq(q);
    return r;
}

int Scalar::sign() const {
    if (big_) return sgn(*big_);
    if (Field::prime()) return n_ == 0 ? 0 : 1;
    return n_ > 0 ? 1 : (n_ < 0 ? -1 : 0);
}

mpq_class Scalar::to_mpq() const {
    if (big_) return *big_;
    mpq_class q{mpz_class(static_cast<long>(n_)), mpz_class(static_cast<long>(d_))};
    return q;
}

void Scalar::set_mpq(const mpq_class& q) {
    const mpz_class& num = q.get_num();
    const mpz_class& den = q.get_den();
    if (num.fits_slong_p() && den.fits_slong_p()) {
        n_ = num.get_si();
        d_ = den.get_si();
        big_.reset();
    } else {
        big_ = std::make_unique<mpq_class>(q);
        n_ = 0;
        d_ = 0;
    }
}

void Scalar::set_small(i128 num, i128 den) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    if (num == 0) {
        n_ = 0;
        d_ = 1;
        big_.reset();
        return;
    }
    if (den != 1) {
        u128 g = gcd128(uabs(num), static_cast<u128>(den));
        if (g > 1) {
            num /= static_cast<i128>(g);
            den /= static_cast<i128>(g);
        }
    }
    if (fits64(num) && fits64(den)) {
        n_ = static_cast<int64_t>(num);
        d_ = static_cast<int64_t>(den);
        big_.reset();
        return;
    }
    mpq_class q(from_i128(num), from_i128(den));
    q.canonicalize();
    set_mpq(q);
}

Scalar Scalar::operator-() const {
    Scalar r;
    int64_t p = Field::prime();
    if (p) {
        r.n_ = n_ == 0 ? 0 : p - n_;
        return r;
    }
    if (big_ || n_ == INT64_MIN) {
        r.set_mpq(-to_mpq());
        return r;
    }
    r.n_ = -n_;
    r.d_ = d_;
    return r;
}

Scalar Scalar::inv() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    Scalar r;
    int64_t p = Field::prime();
    if (p) {
        r.n_ = inv_mod(n_, p);
        return r;
    }
    if (big_) {
        r.set_mpq(1 / *big_);
        return r;
    }
    r.set_small(d_, n_);
    return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
    int64_t p = Field::prime();
    if (p) {
        n_ += o.n_;
        if (n_ >= p) n_ -= p;
        return *this;
    }
    if (!big_ && !o.big_) {
        if (d_ == 1 && o.d_ == 1) {
            int64_t s;
            if (!__builtin_add_overflow(n_, o.n_, &s)) {
                n_ = s;
                return *this;
            }
        }
        set_small(static_cast<i128>(n_) * o.d_ + static_cast<i128>(o.n_) * d_, static_cast<i128>(d_) * o.d_);
        return *this;
    }
    set_mpq(to_mpq() + o.to_mpq());
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    int64_t p = Field::prime();
    if (p) {
        n_ -= o.n_;
        if (n_ < 0) n_ += p;
        return *this;
    }
    if (!big_ && !o.big_) {
        if (d_ == 1 && o.d_ == 1) {
            int64_t s;
            if (!__builtin_sub_overflow(n_, o.n_, &s)) {
                n_ = s;
                return *this;
            }
        }
        set_small(static_cast<i128>(n_) * o.d_ - static_cast<i128>(o.n_) * d_, static_cast<i128>(d_) * o.d_);
        return *this;
    }
    set_mpq(to_mpq() - o.to_mpq());
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    int64_t p = Field::prime();
    if (p) {
        n_ = static_cast<int64_t>(static_cast<i128>(n_) * o.n_ % p);
        return *this;
    }
    if (!big_ && !o.big_) {
        if (d_ == 1 && o.d_ == 1) {
            int64_t s;
            if (!__builtin_mul_overflow(n_, o.n_, &s)) {
                n_ = s;
                return *this;
            }
        }
        set_small(static_cast<i128>(n_) * o.n_, static_cast<i128>(d_) * o.d_);
        return *this;
    }
    set_mpq(to_mpq() * o.to_mpq());
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inv(); }

void Scalar::add_mul(const Scalar& b, const Scalar& c) {
    if (b.is_zero() || c.is_zero()) return;
    int64_t p = Field::prime();
    if (p) {
        n_ = static_cast<int64_t>((static_cast<i128>(b.n_) * c.n_ + n_) % p);
        return;
    }
    if (!big_ && !b.big_ && !c.big_ && d_ == 1 && b.d_ == 1 && c.d_ == 1) {
        int64_t prod, s;
        if (!__builtin_mul_overflow(b.n_, c.n_, &prod) && !__builtin_add_overflow(n_, prod, &s)) {
            n_ = s;
            return;
        }
    }
    *this += b * c;
}

bool operator==(const Scalar& a, const Scalar& b) {
    if (!a.big_ && !b.big_) return a.n_ == b.n_ && a.d_ == b.d_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;  // canonical forms: a big value never equals a small one
}

std::string Scalar::str() const {
    if (big_) return big_->get_str();
    if (d_ == 1) return std::to_string(n_);
    return std::to_string(n_) + "/" + std::to_string(d_);
}

}  // namespace tx
