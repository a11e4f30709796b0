#pragma once

#include <cstdlib>
#include <numeric>
#include <vector>

#include "arith.hpp"
#include "genus.hpp"
#include "governing.hpp"
#include "linalg.hpp"
#include "rayclass.hpp"

/// Independent verification paths.  Everything here re-derives quantities the
/// main pipeline computes through closed formulas, using only first-principles
/// searches: conic solvability by exhaustion over completions, the genus count
/// through the norm-index formula, and ambiguous classes of binary quadratic
/// forms by direct enumeration of reduced forms.

namespace stgenus {

namespace detail {

/// Unit part and valuation parity of n at the prime q (q = 2 allowed).
/// The parity is all that matters for a symbol; squares of q are stripped.
struct LocalPart {
    int val_parity = 0;
    i64 unit = 0;  // n / q^val, sign retained
};

inline LocalPart local_part(i64 n, i64 q) {
    LocalPart lp;
    int v = 0;
    while (n % q == 0) {
        n /= q;
        ++v;
    }
    lp.val_parity = v & 1;
    lp.unit = n;
    return lp;
}

/// Bitmask of squares modulo 64.
inline u64 squares_mod64() {
    u64 mask = 0;
    for (i64 z = 0; z < 64; ++z) mask |= 1ull << ((z * z) & 63);
    return mask;
}

/// Quadratic-residue table modulo an odd prime: table[t] = 1 iff t is a
/// square mod q (0 counts as a square).
inline std::vector<std::uint8_t> qr_table(u64 q) {
    std::vector<std::uint8_t> table(q, 0);
    for (u64 z = 0; z <= q / 2; ++z) table[mulmod(z, z, q)] = 1;
    return table;
}

}  // namespace detail

/// Additive Hilbert symbol decided by exhaustive search in the completion:
/// 0 iff z^2 = a x^2 + b y^2 has a nonzero solution over Q_v.  Shares no
/// formula with hilbert_add.
///
/// At 2: with a, b normalised to valuations in {0,1}, solvability is
/// equivalent to a triple (x, y, z), not all even, satisfying the congruence
/// mod 2^6.  An exact primitive solution reduces to such a triple (x, y both
/// even would force z even); conversely a triple with x or y odd has a
/// gradient coordinate 2ax or 2by of valuation at most 2, and 6 > 2*2 lets
/// Newton's lemma lift it.  Since z^2 mod 64 only needs an existence check,
/// the sweep runs over (x, y) with a square-residue bitmask; x, y both even
/// never certifies (the right side would be 0 mod 4, an odd z^2 is 1 mod 8).
///
/// At odd q: split on the valuation parities (alpha, beta) of (a, b).
///   (0,0) a point of the smooth conic mod q lifts (some gradient coordinate
///         is a unit), so sweep (x, y) != (0, 0) for u x^2 + w y^2 a square;
///   (0,1) a primitive solution forces x to be a unit and z^2 = u x^2 mod q,
///         so solvability means u is a residue, checked by scanning s^2 = u;
///   (1,0) symmetric in (a, b);
///   (1,1) dividing out one q turns the condition into u x^2 + w y^2 = 0
///         mod q with x, y units, so scan u x^2 = -w with y scaled to 1.
inline f2 hilbert_bruteforce(i64 a, i64 b, const Place& v) {
    detail::require(a != 0 && b != 0, errc::zero_argument,
                    "hilbert symbol needs nonzero arguments");
    switch (v.kind) {
        case PlaceKind::infinity:
            return (a < 0 && b < 0) ? 1 : 0;
        case PlaceKind::two: {
            auto pa = detail::local_part(a, 2);
            auto pb = detail::local_part(b, 2);
            const i64 a64 = (detail::umod(pa.unit, 64) << pa.val_parity) & 63;
            const i64 b64 = (detail::umod(pb.unit, 64) << pb.val_parity) & 63;
            static const u64 sq = detail::squares_mod64();
            for (i64 x = 0; x < 64; ++x) {
                for (i64 y = (x & 1) ? 0 : 1; y < 64; y += (x & 1) ? 1 : 2) {
                    const i64 t = (a64 * x * x + b64 * y * y) & 63;
                    if (sq >> t & 1) return 0;
                }
            }
            return 1;
        }
        case PlaceKind::odd_prime: {
            auto pa = detail::local_part(a, v.q);
            auto pb = detail::local_part(b, v.q);
            if (pa.val_parity == 1 && pb.val_parity == 0)
                return hilbert_bruteforce(b, a, v);  // the conic is symmetric in (a, b)
            const u64 q = static_cast<u64>(v.q);
            const u64 u = static_cast<u64>(detail::umod(pa.unit, v.q));
            const u64 w = static_cast<u64>(detail::umod(pb.unit, v.q));
            if (pa.val_parity == 0 && pb.val_parity == 1) {
                for (u64 s = 1; s < q; ++s)
                    if (detail::mulmod(s, s, q) == u) return 0;
                return 1;
            }
            if (pa.val_parity == 1 && pb.val_parity == 1) {
                for (u64 x = 1; x < q; ++x)
                    if ((detail::mulmod(u, detail::mulmod(x, x, q), q) + w) % q == 0) return 0;
                return 1;
            }
            auto table = detail::qr_table(q);
            for (u64 x = 0; x < q; ++x) {
                const u64 ux2 = detail::mulmod(u, detail::mulmod(x, x, q), q);
                for (u64 y = (x == 0) ? 1 : 0; y < q; ++y) {
                    const u64 t = (ux2 + detail::mulmod(w, detail::mulmod(y, y, q), q)) % q;
                    if (table[t]) return 0;
                }
            }
            return 1;
        }
    }
    detail::fail(errc::invalid_place, "unrecognised place kind");
}

/// Same row basis and column plan as build_matrix_caserule, but every entry
/// is the local norm-residue pairing hilbert_bruteforce(w, d, v) evaluated by
/// exhaustion; the two builders must agree entrywise.
inline MatrixFp build_matrix_hilbert(const ProblemInstance& inst) {
    auto rs = detail::row_system(inst);
    auto cols = detail::column_plan(inst);
    MatrixFp m = detail::labelled_matrix(rs, cols);
    for (std::size_t r = 0; r < rs.wt.dim(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
            m.set(r, c, hilbert_bruteforce(rs.class_reps[r], inst.d, cols[c]));
    return m;
}

/// Genus count through the norm-index formula:
///   log2 g = #S^ns + #Sigma - log2 [E : E cap N],
/// with the norm index read off as the rank of the pairing of the row basis
/// against ALL places of Sigma, S, 2 and infinity.  Columns at split
/// S-places or at places outside the ramified/non-split support must vanish
/// identically; that is checked entry by entry, not assumed.
inline u64 genus_via_formula(const ProblemInstance& inst) {
    auto rs = detail::row_system(inst);

    std::vector<Place> cols;
    for (i64 q : inst.sigma)
        if (q != 2) cols.push_back(Place::odd(q));
    cols.push_back(Place::two());
    for (i64 q : inst.places.s0)
        if (q != 2) cols.push_back(Place::odd(q));
    cols.push_back(Place::infinity());

    std::size_t s_nonsplit = 0;
    for (i64 q : inst.places.s0)
        if (splitting_type(inst.d, Place::finite(q)) != SplittingType::split) ++s_nonsplit;
    if (inst.places.s_inf &&
        splitting_type(inst.d, Place::infinity()) != SplittingType::split)
        ++s_nonsplit;

    auto genuine = [&](const Place& v) {
        switch (v.kind) {
            case PlaceKind::odd_prime:
                if (std::binary_search(inst.sigma.begin(), inst.sigma.end(), v.q)) return true;
                return std::binary_search(inst.places.s0.begin(), inst.places.s0.end(), v.q) &&
                       splitting_type(inst.d, v) != SplittingType::split;
            case PlaceKind::two:
                if (!inst.sigma.empty() && inst.sigma.front() == 2) return true;
                return std::binary_search(inst.places.s0.begin(), inst.places.s0.end(), i64{2}) &&
                       splitting_type(inst.d, v) != SplittingType::split;
            case PlaceKind::infinity:
                return inst.places.s_inf && inst.d < 0;
        }
        return false;
    };

    MatrixFp m = MatrixFp::zero(2, rs.wt.dim(), cols.size());
    for (std::size_t r = 0; r < rs.wt.dim(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            f2 e = hilbert_bruteforce(rs.class_reps[r], inst.d, cols[c]);
            detail::require(e == 0 || genuine(cols[c]), errc::internal_check,
                            "split or extraneous place " + cols[c].str() +
                                " pairs nontrivially");
            m.set(r, c, e);
        }
    }

    const std::size_t rank = rank_fp(m);
    const std::size_t support = s_nonsplit + inst.sigma.size();
    detail::require(rank <= support, errc::internal_check,
                    "norm index exceeds the ramified/non-split support");
    const std::size_t log2_g = support - rank;
    detail::require(log2_g < 63, errc::value_out_of_range, "genus number overflows 64 bits");
    return 1ull << log2_g;
}

/// Positive-definite binary quadratic form a x^2 + b x y + c y^2.
struct BQForm {
    i64 a = 0, b = 0, c = 0;

    i64 disc() const { return b * b - 4 * a * c; }

    bool is_reduced() const {
        if (!(std::abs(b) <= a && a <= c)) return false;
        if ((std::abs(b) == a || a == c) && b < 0) return false;
        return true;
    }

    /// Fixed by inversion in the class group.
    bool is_ambiguous() const { return b == 0 || a == b || a == c; }
};

struct BqfClassData {
    u64 h = 0;          // class number: count of reduced forms
    u64 ambiguous = 0;  // reduced forms fixed by inversion (2-torsion count)
    std::vector<BQForm> forms;
};

/// Class data of the form class group for a negative fundamental
/// discriminant, by enumerating reduced forms directly: a <= sqrt(|D|/3),
/// -a < b <= a, c determined, with the boundary normalisations b >= 0 when
/// |b| = a or a = c.  Fundamentality makes every form primitive (checked).
inline BqfClassData bqf_class_data(i64 disc) {
    detail::require(disc < 0, errc::not_fundamental, "discriminant must be negative");
    const i64 r4 = detail::umod(disc, 4);
    detail::require(r4 == 0 || r4 == 1, errc::not_fundamental,
                    "discriminant must be 0 or 1 mod 4");
    try {
        if (r4 == 1) {
            factor_squarefree(disc);
        } else {
            const i64 m = disc / 4;
            factor_squarefree(m);
            const i64 rm = detail::umod(m, 4);
            detail::require(rm == 2 || rm == 3, errc::not_fundamental,
                            "discriminant/4 must be 2 or 3 mod 4");
        }
    } catch (const Error& e) {
        if (e.code() == errc::not_squarefree)
            detail::fail(errc::not_fundamental, "discriminant has a square factor");
        throw;
    }

    BqfClassData data;
    for (i64 a = 1; 3 * a * a <= -disc; ++a) {
        for (i64 b = -a + 1; b <= a; ++b) {
            const i64 num = b * b - disc;
            if (num % (4 * a) != 0) continue;
            const i64 c = num / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            detail::require(std::gcd(std::gcd(a, std::abs(b)), c) == 1, errc::internal_check,
                            "imprimitive reduced form at a fundamental discriminant");
            BQForm f{a, b, c};
            ++data.h;
            if (f.is_ambiguous()) ++data.ambiguous;
            data.forms.push_back(f);
        }
    }
    return data;
}

}  // namespace stgenus
