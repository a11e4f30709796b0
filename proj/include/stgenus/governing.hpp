#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "arith.hpp"
#include "linalg.hpp"

/// The multiplicative group generated by -1 and a set of primes S0, its
/// quotient mod squares, and the subgroup of elements congruent to 1 modulo
/// every prime in an auxiliary set T.  Frobenius data of primes over the
/// multiquadratic field generated by square roots of the generators.

namespace stgenus {

/// S = S0 (finite primes, 2 allowed) together with the real place when
/// s_inf is set; T is a disjoint set of odd primes imposing congruences.
struct PlaceSets {
    std::vector<i64> s0;  // ascending primes
    bool s_inf = false;
    std::vector<i64> t;   // ascending odd primes, disjoint from s0

    static PlaceSets make(std::vector<i64> s0, bool s_inf, std::vector<i64> t) {
        PlaceSets p;
        p.s_inf = s_inf;
        for (i64 q : s0) {
            detail::require(q >= 2 && is_prime(static_cast<u64>(q)), errc::invalid_place,
                            "S0 entry is not prime: " + std::to_string(q));
        }
        for (i64 q : t) {
            detail::require(q > 2 && q % 2 != 0 && is_prime(static_cast<u64>(q)),
                            errc::invalid_place,
                            "T entry is not an odd prime: " + std::to_string(q));
        }
        std::sort(s0.begin(), s0.end());
        s0.erase(std::unique(s0.begin(), s0.end()), s0.end());
        std::sort(t.begin(), t.end());
        t.erase(std::unique(t.begin(), t.end()), t.end());
        for (i64 q : t)
            detail::require(!std::binary_search(s0.begin(), s0.end(), q), errc::overlap,
                            "place " + std::to_string(q) + " appears in both S0 and T");
        p.s0 = std::move(s0);
        p.t = std::move(t);
        return p;
    }

    bool operator==(const PlaceSets&) const = default;
};

/// Generators of the S-unit group of Q mod squares: -1 first when the real
/// place is relaxed, then the S0 primes ascending.  The ordering is a frozen
/// contract; matrix row labels and downstream golden data depend on it.
struct GoverningBasis {
    std::vector<i64> gens;

    std::size_t dim() const { return gens.size(); }
    bool operator==(const GoverningBasis&) const = default;
};

inline GoverningBasis governing_basis(const PlaceSets& p) {
    GoverningBasis b;
    if (p.s_inf) b.gens.push_back(-1);
    for (i64 q : p.s0) b.gens.push_back(q);
    return b;
}

/// Restriction of the Frobenius at q to the multiquadratic extension
/// Q(sqrt(g_0), ..., sqrt(g_s)): coordinate j is the additive Legendre symbol
/// (g_j / q).  q must be an odd prime unramified in that extension, i.e.
/// coprime to 2 and to every generator.
inline std::vector<f2> frobenius_vector(i64 q, const GoverningBasis& b) {
    detail::require(q >= 2 && is_prime(static_cast<u64>(q)), errc::invalid_place,
                    "frobenius is defined at primes, got " + std::to_string(q));
    detail::require(q != 2, errc::ramified_in_governing,
                    "2 divides the governing conductor");
    std::vector<f2> out;
    out.reserve(b.gens.size());
    for (i64 g : b.gens) {
        detail::require(g == -1 || g % q != 0, errc::ramified_in_governing,
                        std::to_string(q) + " ramifies in the governing field");
        out.push_back(legendre_add(g, q));
    }
    return out;
}

namespace detail {

/// Smallest primitive root mod an odd prime t (t - 1 factored exactly).
inline i64 primitive_root(i64 t) {
    std::vector<u64> fac;
    factor_u64(static_cast<u64>(t - 1), fac);
    std::sort(fac.begin(), fac.end());
    fac.erase(std::unique(fac.begin(), fac.end()), fac.end());
    for (i64 g = 2;; ++g) {
        bool ok = true;
        for (u64 p : fac) {
            if (powmod(static_cast<u64>(g), static_cast<u64>(t - 1) / p,
                       static_cast<u64>(t)) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
}

/// Baby-step/giant-step discrete log of x in <g> = (Z/t)^x, t an odd prime.
inline i64 bsgs_dlog(i64 x0, i64 g, i64 t) {
    const u64 t_u = static_cast<u64>(t);
    u64 x = static_cast<u64>(umod(x0, t));
    require(x != 0, errc::not_coprime, "dlog of a multiple of the modulus");
    const u64 m = static_cast<u64>(std::ceil(std::sqrt(static_cast<double>(t - 1)))) + 1;
    std::unordered_map<u64, u64> baby;
    baby.reserve(m * 2);
    u64 cur = 1;
    for (u64 j = 0; j < m; ++j) {
        baby.emplace(cur, j);  // keep the smallest j for each value
        cur = mulmod(cur, static_cast<u64>(g), t_u);
    }
    const u64 giant = powmod(powmod(static_cast<u64>(g), t_u - 2, t_u), m, t_u);  // g^(-m)
    u64 y = x;
    for (u64 i = 0; i <= m; ++i) {
        auto it = baby.find(y);
        if (it != baby.end()) return static_cast<i64>(i * m + it->second);
        y = mulmod(y, giant, t_u);
    }
    fail(errc::internal_check, "dlog not found; generator is not primitive");
}

}  // namespace detail

/// One basis element of the T-congruent subgroup: its coordinates over the
/// governing basis mod squares, the exact exponent vector of a representative
/// that is 1 mod every t in T, and that representative collapsed to a 64-bit
/// integer when it fits (exponents can be large enough that it does not).
struct Witness {
    std::vector<i64> exponents;     // over the governing basis, exact
    std::optional<i64> value;       // prod gens[i]^exponents[i] if representable

    bool operator==(const Witness&) const = default;
};

struct SubgroupWT {
    std::size_t ambient_dim = 0;
    std::vector<std::vector<f2>> basis;  // reduced echelon, pivots ascending
    std::vector<Witness> witnesses;      // parallel to basis

    std::size_t dim() const { return basis.size(); }
};

namespace detail {

inline std::optional<i64> collapse_witness(const std::vector<i64>& gens,
                                           const std::vector<i64>& exps) {
    i64 value = 1;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        i64 e = exps[i];
        if (e == 0) continue;
        if (gens[i] == -1) {
            if (umod(e, 2) == 1) value = -value;
            continue;
        }
        if (e < 0) return std::nullopt;  // rational representative
        if (e > 63) return std::nullopt;  // 2^64 < smallest possible power
        for (i64 k = 0; k < e; ++k) {
            if (__builtin_mul_overflow(value, gens[i], &value)) return std::nullopt;
        }
    }
    return value;
}

}  // namespace detail

/// Label for matrix rows: the collapsed integer when available, otherwise a
/// factored form such as "-1*3^11".
inline std::string witness_label(const GoverningBasis& b, const Witness& w) {
    if (w.value) return std::to_string(*w.value);
    std::string out;
    for (std::size_t i = 0; i < b.gens.size(); ++i) {
        if (w.exponents[i] == 0) continue;
        if (!out.empty()) out += "*";
        if (b.gens[i] == -1) {
            out += "-1";
        } else {
            out += std::to_string(b.gens[i]);
            if (w.exponents[i] != 1) out += "^" + std::to_string(w.exponents[i]);
        }
    }
    return out.empty() ? "1" : out;
}

/// Value of the witness modulo an odd prime t (exponents folded mod t-1).
inline i64 witness_value_mod(const GoverningBasis& b, const Witness& w, i64 t) {
    u64 acc = 1;
    for (std::size_t i = 0; i < b.gens.size(); ++i) {
        i64 g = detail::umod(b.gens[i], t);
        detail::require(g != 0, errc::not_coprime, "witness generator divides the modulus");
        u64 e = static_cast<u64>(detail::umod(w.exponents[i], t - 1));
        acc = detail::mulmod(acc, detail::powmod(static_cast<u64>(g), e, static_cast<u64>(t)),
                             static_cast<u64>(t));
    }
    return static_cast<i64>(acc);
}

/// Square-class representative in Q^x: the product of generators with odd
/// exponent.  Always small for the bases this library builds.
inline i64 witness_class_rep(const GoverningBasis& b, const std::vector<f2>& vec) {
    i64 r = 1;
    for (std::size_t i = 0; i < b.gens.size(); ++i)
        if (vec[i])
            r = detail::checked_mul(r, b.gens[i], errc::value_out_of_range,
                                    "square-class representative overflows");
    return r;
}

/// Exact computation of the subgroup of the S-units (mod squares) congruent
/// to 1 modulo every t in T.  Discrete logs express the T-congruences as an
/// integer lattice kernel; its reduction mod 2 is the subgroup, and lattice
/// vectors double as congruence witnesses.
inline SubgroupWT wt_subgroup(const GoverningBasis& b, const std::vector<i64>& t_set) {
    const std::size_t n = b.dim();
    std::vector<std::vector<i64>> dlogs;
    std::vector<i64> orders;
    for (i64 t : t_set) {
        detail::require(t > 2 && t % 2 != 0 && is_prime(static_cast<u64>(t)), errc::invalid_place,
                        "T entry is not an odd prime: " + std::to_string(t));
        detail::require(t <= 1000000, errc::value_out_of_range,
                        "T entry exceeds the discrete-log budget of 10^6");
        i64 root = detail::primitive_root(t);
        std::vector<i64> row(n);
        for (std::size_t j = 0; j < n; ++j) {
            detail::require(b.gens[j] == -1 || b.gens[j] % t != 0, errc::overlap,
                            "T must be disjoint from the governing basis");
            // -1 sits halfway up the cyclic group; no search needed.
            row[j] = b.gens[j] == -1 ? (t - 1) / 2 : detail::bsgs_dlog(b.gens[j], root, t);
        }
        dlogs.push_back(std::move(row));
        orders.push_back(t - 1);
    }

    auto lattice = congruence_kernel(n, dlogs, orders);

    // Reduce mod 2 and eliminate, mirroring every row operation on the exact
    // exponent vectors so each surviving row keeps a congruence witness.
    struct Row {
        std::vector<f2> vec;
        std::vector<i64> exps;
    };
    std::vector<Row> rows;
    rows.reserve(lattice.size());
    for (auto& v : lattice) {
        Row r;
        r.vec.resize(n);
        for (std::size_t j = 0; j < n; ++j) r.vec[j] = static_cast<f2>(detail::umod(v[j], 2));
        r.exps = std::move(v);
        rows.push_back(std::move(r));
    }
    std::size_t top = 0;
    for (std::size_t col = 0; col < n && top < rows.size(); ++col) {
        std::size_t sel = top;
        while (sel < rows.size() && rows[sel].vec[col] == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[sel], rows[top]);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == top || rows[i].vec[col] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                rows[i].vec[j] ^= rows[top].vec[j];
                rows[i].exps[j] = detail::checked_addmul(rows[i].exps[j], 1, rows[top].exps[j]);
            }
        }
        ++top;
    }

    SubgroupWT out;
    out.ambient_dim = n;
    for (std::size_t i = 0; i < top; ++i) {
        // The sign generator has order 2: fold its exponent into {0, 1}.
        if (!b.gens.empty() && b.gens[0] == -1)
            rows[i].exps[0] = detail::umod(rows[i].exps[0], 2);
        Witness w;
        w.value = detail::collapse_witness(b.gens, rows[i].exps);
        w.exponents = std::move(rows[i].exps);
        out.basis.push_back(std::move(rows[i].vec));
        out.witnesses.push_back(std::move(w));
    }
    return out;
}

/// Dimension of the subgroup predicted by the Frobenius-quotient shortcut:
/// dim(basis) - #T, valid only when the T-Frobenius vectors are linearly
/// independent.  Returns nullopt (the shortcut fails) otherwise; callers fall
/// back to the exact wt_subgroup path.
inline std::optional<std::size_t> gamma_dim_quotient(const GoverningBasis& b,
                                                     const std::vector<i64>& t_set) {
    const std::size_t n = b.dim();
    MatrixFp m = MatrixFp::zero(2, t_set.size(), n);
    for (std::size_t i = 0; i < t_set.size(); ++i) {
        auto fv = frobenius_vector(t_set[i], b);
        for (std::size_t j = 0; j < n; ++j) m.set(i, j, fv[j]);
    }
    if (rank_fp(m) != t_set.size()) return std::nullopt;
    return n - t_set.size();
}

}  // namespace stgenus
