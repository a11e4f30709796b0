#pragma once

#include <vector>

#include "arith.hpp"
#include "governing.hpp"

namespace stgenus {

/// Order of the ray class group of Q with squarefree odd modulus m, relaxed
/// at the places in P: (Z/m)^x modulo the subgroup generated by -1 (when the
/// real place is relaxed) and the images of the S0 primes.  Computed by
/// literal closure enumeration of that subgroup, so the modulus is capped.
inline u64 ray_class_order(i64 m, const PlaceSets& p) {
    detail::require(m >= 1, errc::value_out_of_range, "modulus must be >= 1");
    detail::require(m % 2 != 0, errc::value_out_of_range, "modulus must be odd");
    detail::require(m <= 10000000, errc::value_out_of_range,
                    "modulus exceeds the enumeration budget of 10^7");
    auto fac = factor_squarefree(m);  // throws NotSquarefree on a square factor
    if (m == 1) return 1;

    u64 phi = 1;
    for (i64 q : fac.primes) phi *= static_cast<u64>(q - 1);

    std::vector<i64> gens;
    if (p.s_inf) gens.push_back(detail::umod(-1, m));
    for (i64 q : p.s0) {
        i64 r = detail::umod(q, m);
        detail::require(std::gcd(r, m) == 1, errc::not_coprime,
                        "S0 prime " + std::to_string(q) + " divides the modulus");
        gens.push_back(r);
    }

    // Closure of <gens> inside (Z/m)^x by breadth-first multiplication.
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(m), 0);
    std::vector<i64> queue{1};
    seen[1] = 1;
    u64 sub = 1;
    while (!queue.empty()) {
        i64 x = queue.back();
        queue.pop_back();
        for (i64 g : gens) {
            i64 y = static_cast<i64>(detail::mulmod(static_cast<u64>(x), static_cast<u64>(g),
                                                    static_cast<u64>(m)));
            if (!seen[y]) {
                seen[y] = 1;
                ++sub;
                queue.push_back(y);
            }
        }
    }
    detail::require(phi % sub == 0, errc::internal_check,
                    "subgroup order does not divide the unit group order");
    return phi / sub;
}

}  // namespace stgenus
