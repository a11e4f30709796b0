#pragma once

#include <random>
#include <string>
#include <vector>

#include "arith.hpp"
#include "genus.hpp"
#include "governing.hpp"
#include "linalg.hpp"
#include "oracle.hpp"

/// Invariant suites binding the closed-formula pipeline to the exhaustive
/// oracles, runnable from the CLI (selftest subcommand) and reused by the
/// test harness.  Each suite is exact: any single mismatch fails it.

namespace stgenus {

struct SuiteResult {
    std::string name;
    bool passed = true;
    std::string detail;  // first failure, empty when passed
};

struct SelfTestReport {
    std::vector<SuiteResult> suites;
    std::size_t failures = 0;
};

inline const std::vector<i64>& primes_below_100() {
    static const std::vector<i64> ps = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                        43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
    return ps;
}

/// Deterministic stream of valid problem instances: squarefree |d| <= dmax,
/// up to three S0 primes below 100, optional relaxed real place, up to two
/// odd T-primes below 100, all disjointness constraints satisfied by
/// rejection sampling.
inline std::vector<ProblemInstance> random_instances(u64 seed, std::size_t count,
                                                     i64 dmax = 100000) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<i64> mag(2, dmax);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<std::size_t> pick(0, primes_below_100().size() - 1);
    std::uniform_int_distribution<int> s0_count(0, 3);
    std::uniform_int_distribution<int> t_count(0, 2);

    std::vector<ProblemInstance> out;
    while (out.size() < count) {
        const i64 d = coin(rng) ? mag(rng) : -mag(rng);
        std::vector<i64> s0, t;
        for (int i = s0_count(rng); i > 0; --i) s0.push_back(primes_below_100()[pick(rng)]);
        const bool s_inf = coin(rng) == 1;
        for (int i = t_count(rng); i > 0; --i) {
            const i64 q = primes_below_100()[pick(rng)];
            if (q != 2) t.push_back(q);
        }
        try {
            out.push_back(ProblemInstance::make(d, PlaceSets::make(s0, s_inf, t)));
        } catch (const Error&) {
            continue;  // non-squarefree d or a disjointness clash: redraw
        }
    }
    return out;
}

namespace selftest_detail {

inline void note_failure(SuiteResult& res, const std::string& what) {
    if (res.passed) {
        res.passed = false;
        res.detail = what;
    }
}

}  // namespace selftest_detail

/// Closed-formula Hilbert symbols against completion exhaustion on a grid of
/// arguments, plus the product formula (symbols over all places XOR to 0).
inline SuiteResult suite_symbol_grid() {
    SuiteResult res;
    res.name = "symbol-grid";
    std::vector<Place> places = {Place::infinity(), Place::two()};
    for (i64 q = 3; q <= 50; q += 2)
        if (is_prime(static_cast<u64>(q))) places.push_back(Place::odd(q));
    const std::vector<i64> mags = {1, 2, 3, 5, 6, 7, 10, 15};
    for (i64 ma : mags) {
        for (int sa : {1, -1}) {
            for (i64 mb : mags) {
                for (int sb : {1, -1}) {
                    const i64 a = sa * ma, b = sb * mb;
                    f2 product = 0;
                    for (const Place& v : places) {
                        const f2 closed = hilbert_add(a, b, v);
                        const f2 brute = hilbert_bruteforce(a, b, v);
                        if (closed != brute)
                            selftest_detail::note_failure(
                                res, "(" + std::to_string(a) + "," + std::to_string(b) + ")_" +
                                         v.str() + ": formula " + std::to_string(closed) +
                                         ", exhaustion " + std::to_string(brute));
                        product ^= closed;
                    }
                    if (product != 0)
                        selftest_detail::note_failure(res, "product formula fails at (" +
                                                               std::to_string(a) + "," +
                                                               std::to_string(b) + ")");
                }
            }
        }
    }
    return res;
}

/// Legendre symbols against square scanning for every odd prime below 1000.
inline SuiteResult suite_legendre_enumeration() {
    SuiteResult res;
    res.name = "legendre-enumeration";
    for (i64 q = 3; q < 1000; q += 2) {
        if (!is_prime(static_cast<u64>(q))) continue;
        auto table = detail::qr_table(static_cast<u64>(q));
        for (i64 a = 1; a < q && a <= 40; ++a) {
            const f2 scanned = table[static_cast<std::size_t>(a)] ? 0 : 1;
            if (legendre_add(a, q) != scanned)
                selftest_detail::note_failure(res, "(" + std::to_string(a) + "/" +
                                                       std::to_string(q) + ") mismatch");
        }
    }
    return res;
}

/// Kernel dimensions by elimination against full kernel enumeration for
/// small random matrices over F_2 and F_3.
inline SuiteResult suite_kernel_enumeration(std::size_t count = 200) {
    SuiteResult res;
    res.name = "kernel-enumeration";
    std::mt19937_64 rng(0xacc01ade);
    for (std::size_t i = 0; i < count; ++i) {
        const int p = (rng() & 1) ? 2 : 3;
        const std::size_t nrows = rng() % 5, ncols = rng() % 5;
        MatrixFp m = MatrixFp::zero(p, nrows, ncols);
        for (auto& e : m.a) e = static_cast<std::uint8_t>(rng() % p);
        std::size_t hits = 0;
        std::size_t total = 1;
        for (std::size_t c = 0; c < ncols; ++c) total *= static_cast<std::size_t>(p);
        for (std::size_t code = 0; code < total; ++code) {
            std::size_t x = code;
            std::vector<int> vec(ncols);
            for (std::size_t c = 0; c < ncols; ++c) {
                vec[c] = static_cast<int>(x % p);
                x /= p;
            }
            bool in_kernel = true;
            for (std::size_t r = 0; r < nrows && in_kernel; ++r) {
                int acc = 0;
                for (std::size_t c = 0; c < ncols; ++c) acc += m.at(r, c) * vec[c];
                in_kernel = acc % p == 0;
            }
            if (in_kernel) ++hits;
        }
        std::size_t expect = 1;
        for (std::size_t j = 0; j < kernel_dim_fp(m); ++j) expect *= static_cast<std::size_t>(p);
        if (hits != expect)
            selftest_detail::note_failure(res, "kernel size " + std::to_string(hits) +
                                                   " vs 2^dim " + std::to_string(expect));
    }
    return res;
}

/// Congruence-kernel fixture: with the real place relaxed and T = {5}, the
/// unit -1 is a square mod 5, so the exact subgroup collapses to dimension 0
/// while the Frobenius-quotient shortcut must refuse (dependent vectors);
/// genus computations then run with an empty row space.
inline SuiteResult suite_congruence_fixture() {
    SuiteResult res;
    res.name = "congruence-fixture";
    auto places = PlaceSets::make({}, true, {5});
    auto basis = governing_basis(places);
    auto wt = wt_subgroup(basis, places.t);
    if (wt.dim() != 0)
        selftest_detail::note_failure(res, "expected trivial congruence subgroup, dim " +
                                               std::to_string(wt.dim()));
    if (gamma_dim_quotient(basis, places.t).has_value())
        selftest_detail::note_failure(res, "Frobenius-quotient path accepted dependent vectors");
    auto rep = genus_number(ProblemInstance::make(21, places));
    if (rep.matrix.nrows != 0 || rep.g != 4)
        selftest_detail::note_failure(res, "fixture d=21: expected 0 rows and g=4, got " +
                                               std::to_string(rep.matrix.nrows) + " rows, g=" +
                                               std::to_string(rep.g));
    return res;
}

/// Classical genus theory for imaginary quadratic fields: with S = T = {},
/// g = 2^{#Sigma}, and the ambiguous reduced-form count is g/2.
inline SuiteResult suite_bqf(i64 disc_limit = 10000) {
    SuiteResult res;
    res.name = "bqf-gauss";
    auto empty = PlaceSets::make({}, false, {});
    for (i64 d = -1; d >= -disc_limit; --d) {
        try {
            factor_squarefree(d);
        } catch (const Error&) {
            continue;
        }
        const i64 disc = detail::umod(d, 4) == 1 ? d : 4 * d;
        if (-disc > disc_limit) continue;
        auto rep = genus_number(ProblemInstance::make(d, empty));
        const u64 expected_g = 1ull << ramification_set(d).size();
        if (rep.g != expected_g)
            selftest_detail::note_failure(res, "d=" + std::to_string(d) + ": g=" +
                                                   std::to_string(rep.g) + " != 2^#Sigma");
        const auto bqf = bqf_class_data(disc);
        if (bqf.ambiguous != rep.g / 2)
            selftest_detail::note_failure(
                res, "d=" + std::to_string(d) + ": ambiguous=" + std::to_string(bqf.ambiguous) +
                         " != g/2=" + std::to_string(rep.g / 2));
    }
    return res;
}

/// Case-rule matrix builder against the Hilbert-exhaustion builder, and the
/// kernel count against the norm-index formula, on random instances.
inline SuiteResult suite_case_vs_hilbert(std::size_t count = 60, i64 dmax = 20000) {
    SuiteResult res;
    res.name = "case-vs-hilbert";
    for (const auto& inst : random_instances(0x5eedf00d, count, dmax)) {
        const MatrixFp lhs = build_matrix_caserule(inst);
        const MatrixFp rhs = build_matrix_hilbert(inst);
        if (!(lhs == rhs)) {
            selftest_detail::note_failure(res, "matrix mismatch at d=" + std::to_string(inst.d));
            continue;
        }
        const auto rep = genus_number(inst);
        const u64 formula = genus_via_formula(inst);
        if (rep.g != formula)
            selftest_detail::note_failure(res, "d=" + std::to_string(inst.d) + ": kernel g=" +
                                                   std::to_string(rep.g) + ", formula g=" +
                                                   std::to_string(formula));
    }
    return res;
}

inline SelfTestReport run_selftest() {
    SelfTestReport report;
    report.suites.push_back(suite_symbol_grid());
    report.suites.push_back(suite_legendre_enumeration());
    report.suites.push_back(suite_kernel_enumeration());
    report.suites.push_back(suite_congruence_fixture());
    report.suites.push_back(suite_bqf(2000));
    report.suites.push_back(suite_case_vs_hilbert());
    for (const auto& s : report.suites)
        if (!s.passed) ++report.failures;
    return report;
}

}  // namespace stgenus
