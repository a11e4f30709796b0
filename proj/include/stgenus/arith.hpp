#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"

/// Exact arithmetic over Q and its completions: deterministic primality,
/// squarefree factorization, additive Legendre/Hilbert symbols and splitting
/// types of quadratic fields.  Everything is a pure function of 64-bit
/// integers; anything that would overflow throws instead of wrapping.

namespace stgenus {

using i64 = std::int64_t;
using u64 = std::uint64_t;

/// Additive F2 value: 0 encodes the trivial symbol (+1), 1 the nontrivial one.
using f2 = std::uint8_t;

namespace detail {

inline i64 umod(i64 x, i64 m) {
    i64 r = x % m;
    return r < 0 ? r + m : r;
}

inline u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

inline u64 powmod(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 r = 1;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

inline i64 checked_mul(i64 a, i64 b, errc code, const char* what) {
    i64 out;
    if (__builtin_mul_overflow(a, b, &out)) fail(code, what);
    return out;
}

}  // namespace detail

/// Deterministic Miller-Rabin over the full 64-bit range.  The witness set
/// {2,3,...,37} is known to be exact below 3.3e24, which covers u64.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) d >>= 1, ++s;
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = detail::powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = detail::mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

namespace detail {

/// Pollard rho (Brent variant).  Only reached for inputs whose remaining
/// cofactor after trial division is a 64-bit composite.
inline u64 pollard_rho(u64 n) {
    if (n % 2 == 0) return 2;
    u64 c = 1;
    while (true) {
        u64 x = 2, y = 2, d = 1;
        auto step = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        while (d == 1) {
            x = step(x);
            y = step(step(y));
            u64 diff = x > y ? x - y : y - x;
            if (diff == 0) break;
            d = std::gcd(diff, n);
        }
        if (d != 1 && d != n) return d;
        ++c;  // rare cycle without factor: retry with a new increment
    }
}

inline void factor_u64(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    u64 d = pollard_rho(n);
    factor_u64(d, out);
    factor_u64(n / d, out);
}

}  // namespace detail

struct SignedFactorization {
    int sign = 1;                 // -1 or +1
    std::vector<i64> primes;      // ascending, pairwise distinct

    bool operator==(const SignedFactorization&) const = default;
};

/// Factor a squarefree 64-bit integer into sign and ascending primes.
/// Throws NotSquarefree when a repeated prime divides d.
inline SignedFactorization factor_squarefree(i64 d) {
    detail::require(d != 0, errc::zero_argument, "factor_squarefree requires d != 0");
    SignedFactorization out;
    out.sign = d < 0 ? -1 : 1;
    u64 n = d < 0 ? static_cast<u64>(-(d + 1)) + 1 : static_cast<u64>(d);
    if (n == 1) return out;
    std::vector<u64> primes;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull,
                  41ull, 43ull, 47ull, 53ull, 59ull, 61ull, 67ull, 71ull, 73ull, 79ull, 83ull,
                  89ull, 97ull}) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0)
                detail::fail(errc::not_squarefree, std::to_string(d) + " is divisible by " +
                                                       std::to_string(p) + "^2");
            primes.push_back(p);
        }
    }
    detail::factor_u64(n, primes);
    std::sort(primes.begin(), primes.end());
    for (std::size_t i = 0; i + 1 < primes.size(); ++i) {
        if (primes[i] == primes[i + 1])
            detail::fail(errc::not_squarefree, std::to_string(d) + " is divisible by " +
                                                   std::to_string(primes[i]) + "^2");
    }
    out.primes.assign(primes.begin(), primes.end());
    return out;
}

enum class PlaceKind { odd_prime, two, infinity };

/// A place of Q: a finite odd prime q, the even prime 2, or the real place.
struct Place {
    PlaceKind kind = PlaceKind::two;
    i64 q = 2;  // meaningful only for odd_prime

    static Place odd(i64 q) {
        detail::require(q > 2 && q % 2 != 0 && is_prime(static_cast<u64>(q)), errc::invalid_place,
                        std::to_string(q) + " is not an odd prime");
        return Place{PlaceKind::odd_prime, q};
    }
    static Place two() { return Place{PlaceKind::two, 2}; }
    static Place infinity() { return Place{PlaceKind::infinity, 0}; }

    /// Finite place above the given prime (2 or odd).
    static Place finite(i64 p) { return p == 2 ? two() : odd(p); }

    std::string str() const {
        switch (kind) {
            case PlaceKind::odd_prime: return std::to_string(q);
            case PlaceKind::two:       return "2";
            case PlaceKind::infinity:  return "inf";
        }
        return "?";
    }

    friend bool operator==(const Place& a, const Place& b) {
        return a.kind == b.kind && (a.kind != PlaceKind::odd_prime || a.q == b.q);
    }
};

/// Square class of a nonzero rational in Q_2^x / (Q_2^x)^2: the parity of the
/// 2-adic valuation together with the odd unit part mod 8.
struct SquareClass2 {
    std::uint8_t val2 = 0;  // 0 or 1
    std::uint8_t unit = 1;  // 1, 3, 5 or 7

    static SquareClass2 of(i64 a) {
        detail::require(a != 0, errc::zero_argument, "square class of 0 is undefined");
        int v = 0;
        while (a % 2 == 0) a /= 2, ++v;
        return SquareClass2{static_cast<std::uint8_t>(v & 1),
                            static_cast<std::uint8_t>(detail::umod(a, 8))};
    }

    SquareClass2 operator*(const SquareClass2& o) const {
        return SquareClass2{static_cast<std::uint8_t>(val2 ^ o.val2),
                            static_cast<std::uint8_t>((unit * o.unit) % 8)};
    }

    auto operator<=>(const SquareClass2&) const = default;
};

namespace detail {

/// Jacobi symbol (a/n) for odd n > 0, by the standard binary reciprocity
/// algorithm (no exponentiation).  Returns -1, 0 or +1.
inline int jacobi(i64 a, i64 n) {
    a = umod(a, n);
    int t = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 r = n % 8;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) t = -t;
        a %= n;
    }
    return n == 1 ? t : 0;
}

}  // namespace detail

/// Additive Legendre symbol of a mod the odd prime q: 0 when a is a nonzero
/// square mod q, 1 when a is a nonsquare.  Throws NotCoprime when q | a.
inline f2 legendre_add(i64 a, i64 q) {
    detail::require(q > 2 && q % 2 != 0 && is_prime(static_cast<u64>(q)), errc::invalid_place,
                    "legendre symbol needs an odd prime modulus, got " + std::to_string(q));
    int j = detail::jacobi(a, q);
    detail::require(j != 0, errc::not_coprime,
                    std::to_string(a) + " is not coprime to " + std::to_string(q));
    return j == 1 ? 0 : 1;
}

/// Kronecker symbol (a/n), extending Jacobi to all integers n.
inline int kronecker(i64 a, i64 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int t = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) t = -t;
    }
    int v = 0;
    while (n % 2 == 0) n /= 2, ++v;
    if (v) {
        if (a % 2 == 0) return 0;
        i64 r = detail::umod(a, 8);
        if ((v & 1) && (r == 3 || r == 5)) t = -t;
    }
    return t * detail::jacobi(a, n);
}

namespace detail {

inline int val_at(i64& x, i64 p) {
    int v = 0;
    while (x % p == 0) x /= p, ++v;
    return v;
}

// (u-1)/2 and (u^2-1)/8 mod 2 for odd u: the unit characters of Q_2.
inline f2 eps2(i64 u) {
    i64 r = umod(u, 4);
    return r == 3 ? 1 : 0;
}
inline f2 omega2(i64 u) {
    i64 r = umod(u, 8);
    return (r == 3 || r == 5) ? 1 : 0;
}

}  // namespace detail

/// Additive Hilbert symbol (a,b)_v: 0 when z^2 = a x^2 + b y^2 has a
/// nontrivial solution over the completion at v, else 1.  Closed form:
/// at an odd prime q with a = q^alpha u, b = q^beta w this is
/// alpha*beta*eps(q) + beta*(u/q) + alpha*(w/q); at 2 with odd parts u, w it
/// is eps(u)eps(w) + alpha*omega(w) + beta*omega(u); at the real place it is
/// nontrivial exactly when both arguments are negative.
inline f2 hilbert_add(i64 a, i64 b, const Place& v) {
    detail::require(a != 0 && b != 0, errc::zero_argument, "hilbert symbol of 0 is undefined");
    switch (v.kind) {
        case PlaceKind::infinity:
            return (a < 0 && b < 0) ? 1 : 0;
        case PlaceKind::two: {
            int alpha = detail::val_at(a, 2);
            int beta = detail::val_at(b, 2);
            f2 val = static_cast<f2>((detail::eps2(a) & detail::eps2(b)) ^
                                     ((alpha & 1) ? detail::omega2(b) : 0) ^
                                     ((beta & 1) ? detail::omega2(a) : 0));
#ifdef STGENUS_FAULT_INJECT
            // Deliberate corruption hook used to prove the self-test suite has
            // teeth: misclassifies units congruent to 3 mod 8.
            if (detail::umod(b, 8) == 3) val ^= 1;
#endif
            return val;
        }
        case PlaceKind::odd_prime: {
            i64 q = v.q;
            int alpha = detail::val_at(a, q);
            int beta = detail::val_at(b, q);
            f2 val = 0;
            if ((alpha & 1) && (beta & 1)) val ^= detail::eps2(q);
            if (beta & 1) val ^= legendre_add(a, q);
            if (alpha & 1) val ^= legendre_add(b, q);
            return val;
        }
    }
    detail::fail(errc::invalid_place, "unknown place kind");
}

/// Overload for rational arguments given as numerator/denominator pairs;
/// a/b and a*b share a square class, so the pair collapses to one integer.
inline f2 hilbert_add(i64 a_num, i64 a_den, i64 b_num, i64 b_den, const Place& v) {
    detail::require(a_den != 0 && b_den != 0, errc::zero_argument, "zero denominator");
    i64 a = detail::checked_mul(a_num, a_den, errc::value_out_of_range, "hilbert argument overflows");
    i64 b = detail::checked_mul(b_num, b_den, errc::value_out_of_range, "hilbert argument overflows");
    return hilbert_add(a, b, v);
}

enum class SplittingType { split, inert, ramified };

inline const char* splitting_name(SplittingType t) {
    switch (t) {
        case SplittingType::split:    return "split";
        case SplittingType::inert:    return "inert";
        case SplittingType::ramified: return "ramified";
    }
    return "?";
}

/// Behaviour of the place v in Q(sqrt(d)) for squarefree d != 0, 1.
/// At an odd prime: ramified iff q | d, else split iff d is a square mod q.
/// At 2: ramified iff d != 1 mod 4, split iff d = 1 mod 8, else inert.
/// At the real place: split iff d > 0 (never reported ramified).
inline SplittingType splitting_type(i64 d, const Place& v) {
    detail::require(d != 0 && d != 1, errc::invalid_discriminant,
                    "need a squarefree d outside {0, 1}");
    try {
        factor_squarefree(d);
    } catch (const Error& e) {
        detail::fail(errc::invalid_discriminant, std::to_string(d) + " is not squarefree");
    }
    switch (v.kind) {
        case PlaceKind::infinity:
            return d > 0 ? SplittingType::split : SplittingType::inert;
        case PlaceKind::two: {
            i64 r = detail::umod(d, 8);
            if (r % 4 != 1) return SplittingType::ramified;
            return r == 1 ? SplittingType::split : SplittingType::inert;
        }
        case PlaceKind::odd_prime: {
            if (d % v.q == 0) return SplittingType::ramified;
            return kronecker(d, v.q) == 1 ? SplittingType::split : SplittingType::inert;
        }
    }
    detail::fail(errc::invalid_place, "unknown place kind");
}

}  // namespace stgenus
