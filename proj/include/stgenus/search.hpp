#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "arith.hpp"
#include "genus.hpp"
#include "governing.hpp"

/// Constructive realization: given S (with the real place relaxed), a count m
/// and a target exponent k, produce m odd primes Sigma and d = prod(Sigma)
/// with Q(sqrt(d)) ramified exactly at Sigma, split at every place of S, and
/// genus number exactly 2^k.  Primes are chosen by prescribing their
/// Frobenius vectors in the governing group; the zero-sum of the prescribed
/// vectors is what makes such a d exist at all.

namespace stgenus {

struct SearchSpec {
    PlaceSets places;  // T empty, real place relaxed
    std::size_t m = 1;
    std::size_t k = 1;
    i64 prime_budget = 100000;

    /// Rank of the governing group for this S: one slot per finite S-prime
    /// plus one for the sign character.
    std::size_t r_s() const { return places.s0.size() + 1; }

    static SearchSpec make(PlaceSets places, std::size_t m, std::size_t k, i64 prime_budget) {
        detail::require(places.t.empty(), errc::invalid_range,
                        "search handles only T = {} (tame congruence search not defined)");
        detail::require(places.s_inf, errc::invalid_range,
                        "search requires the real place relaxed (sInf)");
        detail::require(m >= 1, errc::invalid_range, "need at least one ramified prime");
        detail::require(prime_budget >= 3, errc::invalid_range, "prime budget too small");
        SearchSpec spec;
        spec.places = std::move(places);
        spec.m = m;
        spec.k = k;
        spec.prime_budget = prime_budget;
        return spec;
    }
};

struct SearchResult {
    std::vector<i64> sigma;  // ascending
    i64 d = 0;
    GenusReport report;
    i64 max_prime = 0;
};

/// Frobenius targets over the governing basis, one per prime of Sigma:
/// with r = m - k deficiencies, the first target is e_1 + ... + e_r, the
/// next r targets are e_1, ..., e_r, and the rest vanish.  The targets sum
/// to zero, which is the existence criterion for a cyclic extension ramified
/// exactly at the chosen primes; it also forces k >= 1 (with m >= 1 the sum
/// of fewer than r + 1 nonzero targets cannot cancel), so k = 0 is rejected
/// rather than searched for in vain.
inline std::vector<std::vector<f2>> plan_targets(const SearchSpec& spec) {
    const std::size_t rs = spec.r_s();
    detail::require(spec.k >= 1 && spec.k <= spec.m && spec.m - spec.k <= rs,
                    errc::invalid_range,
                    "need max(1, m - " + std::to_string(rs) + ") <= k <= m");
    const std::size_t r = spec.m - spec.k;
    std::vector<std::vector<f2>> targets(spec.m, std::vector<f2>(rs, 0));
    for (std::size_t i = 0; i < r; ++i) {
        targets[0][i] = 1;       // e_1 + ... + e_r
        targets[i + 1][i] = 1;   // e_i
    }
    return targets;
}

/// For each target in order, the smallest unused odd prime outside S with the
/// prescribed Frobenius vector; the scan is ascending, so results are
/// reproducible regardless of how callers schedule the work.
inline std::vector<i64> find_primes(const std::vector<std::vector<f2>>& targets,
                                    const GoverningBasis& basis, i64 prime_budget) {
    std::vector<i64> chosen;
    for (const auto& target : targets) {
        bool found = false;
        for (i64 q = 3; q <= prime_budget; q += 2) {
            if (!is_prime(static_cast<u64>(q))) continue;
            if (std::find(chosen.begin(), chosen.end(), q) != chosen.end()) continue;
            bool divides_gen = false;
            for (i64 g : basis.gens)
                if (g != -1 && g % q == 0) divides_gen = true;
            if (divides_gen) continue;
            if (frobenius_vector(q, basis) == target) {
                chosen.push_back(q);
                found = true;
                break;
            }
        }
        if (!found) {
            std::string bits;
            for (f2 b : target) bits += b ? '1' : '0';
            detail::fail(errc::budget_exhausted,
                         "no prime <= " + std::to_string(prime_budget) +
                             " with Frobenius vector " + bits);
        }
    }
    return chosen;
}

/// d = prod(primes); every consequence of the target plan is re-checked
/// rather than assumed: d = 1 mod 4 (so 2 stays unramified), d = 1 mod 8
/// when 2 is an S-prime, splitting at every S-place, ramification set equal
/// to Sigma, and finally the full genus computation returning exactly 2^k.
inline SearchResult assemble_and_verify(const SearchSpec& spec, const std::vector<i64>& primes) {
    SearchResult res;
    res.sigma = primes;
    std::sort(res.sigma.begin(), res.sigma.end());
    res.d = 1;
    for (i64 q : primes) {
        res.d = detail::checked_mul(res.d, q, errc::value_out_of_range,
                                    "product of ramified primes overflows");
        res.max_prime = std::max(res.max_prime, q);
    }

    detail::require(res.d > 0 && detail::umod(res.d, 4) == 1, errc::verification_failed,
                    "d = " + std::to_string(res.d) + " is not 1 mod 4");
    const bool two_in_s = std::binary_search(spec.places.s0.begin(), spec.places.s0.end(), i64{2});
    detail::require(!two_in_s || detail::umod(res.d, 8) == 1, errc::verification_failed,
                    "d = " + std::to_string(res.d) + " is not 1 mod 8 despite 2 in S");
    for (i64 l : spec.places.s0)
        detail::require(kronecker(res.d, l) == 1, errc::verification_failed,
                        "S-prime " + std::to_string(l) + " does not split in Q(sqrt(d))");

    detail::require(ramification_set(res.d) == res.sigma, errc::verification_failed,
                    "ramification set of d differs from the chosen primes");

    auto inst = ProblemInstance::make(res.d, spec.places);
    res.report = genus_number(inst);
    detail::require(res.report.log2_g == spec.k, errc::verification_failed,
                    "genus 2^" + std::to_string(res.report.log2_g) + " for d = " +
                        std::to_string(res.d) + ", wanted 2^" + std::to_string(spec.k));
    return res;
}

inline SearchResult run_search(const SearchSpec& spec) {
    auto targets = plan_targets(spec);
    auto basis = governing_basis(spec.places);
    auto primes = find_primes(targets, basis, spec.prime_budget);
    return assemble_and_verify(spec, primes);
}

}  // namespace stgenus
