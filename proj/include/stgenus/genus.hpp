#pragma once

#include <set>
#include <string>
#include <vector>

#include "arith.hpp"
#include "governing.hpp"
#include "linalg.hpp"
#include "rayclass.hpp"

/// Genus numbers of the quadratic extension L = Q(sqrt(d)): the kernel size
/// of the symbol matrix pairing the T-congruent S-units against the ramified
/// places of L and the non-split places of S.

namespace stgenus {

/// Ramified places of Q(sqrt(d))/Q: the odd primes dividing d, preceded by 2
/// when d != 1 mod 4 (the real place is tracked separately).  Ascending.
inline std::vector<i64> ramification_set(i64 d) {
    detail::require(d != 0 && d != 1, errc::invalid_discriminant,
                    "need a squarefree d outside {0, 1}");
    auto fac = factor_squarefree(d);
    std::vector<i64> sigma;
    if (detail::umod(d, 4) != 1) sigma.push_back(2);
    for (i64 q : fac.primes)
        if (q != 2) sigma.push_back(q);
    // d squarefree and != 1 mod 4 cannot itself be even and escape 2: if
    // 2 | d then d = 2 mod 4, so the branch above already inserted 2.
    return sigma;
}

/// Unit square classes mod 8 that are norms from Q_2(sqrt(d)), found by
/// sweeping the norm form x^2 - d y^2 over primitive pairs.  A scaling
/// exponent s <= 2 with modulus 4^s * 32 is exhaustive: a 2-adic norm of a
/// unit u is 4^-s (x^2 - d y^2) with (x, y) primitive, s is forced <= 1
/// unless d = 1 mod 8, and in that split case s = 2 with y = 1 realises
/// every unit class because odd squares fill the residues 1 mod 8.  Each
/// accepted sweep point is an exact integer witness pinning the unit part
/// mod 32, so no lifting argument is needed.
inline std::set<SquareClass2> w2_norm_classes(i64 d) {
    detail::require(d != 0 && d != 1, errc::invalid_discriminant,
                    "need a squarefree d outside {0, 1}");
    factor_squarefree(d);
    std::set<SquareClass2> out;
    for (int s = 0; s <= 2 && out.size() < 4; ++s) {
        const i64 mod = 32ll << (2 * s);
        const i64 pow4 = 1ll << (2 * s);
        const i64 dm = detail::umod(d, mod);
        for (i64 x = 0; x < mod; ++x) {
            for (i64 y = 0; y < mod; ++y) {
                if ((x & 1) == 0 && (y & 1) == 0) continue;  // not primitive
                i64 t = detail::umod(x * x - dm * y * y, mod);
                if (t % pow4 != 0) continue;
                i64 u = t / pow4;
                if ((u & 1) == 0) continue;
                out.insert(SquareClass2{0, static_cast<std::uint8_t>(u % 8)});
            }
        }
    }
    return out;
}

/// One quadratic field plus the places S and T steering the genus computation.
/// Validation enforces the strict disjointness the matrix rules rely on.
struct ProblemInstance {
    i64 d = 0;
    PlaceSets places;
    std::vector<i64> sigma;  // ramification_set(d), cached

    static ProblemInstance make(i64 d, PlaceSets places) {
        ProblemInstance inst;
        inst.d = d;
        inst.sigma = ramification_set(d);  // validates d
        for (i64 q : places.s0)
            detail::require(!std::binary_search(inst.sigma.begin(), inst.sigma.end(), q),
                            errc::overlap,
                            "S0 place " + std::to_string(q) + " ramifies in Q(sqrt(d))");
        for (i64 q : places.t)
            detail::require(!std::binary_search(inst.sigma.begin(), inst.sigma.end(), q),
                            errc::overlap,
                            "T place " + std::to_string(q) + " ramifies in Q(sqrt(d))");
        inst.places = std::move(places);
        return inst;
    }
};

namespace detail {

/// Frozen column order shared by every matrix builder: odd ramified primes
/// ascending, then 2 when ramified, then the non-split finite S-places
/// ascending, then the real place when relaxed and non-split.
inline std::vector<Place> column_plan(const ProblemInstance& inst) {
    std::vector<Place> cols;
    for (i64 q : inst.sigma)
        if (q != 2) cols.push_back(Place::odd(q));
    if (!inst.sigma.empty() && inst.sigma.front() == 2) cols.push_back(Place::two());
    for (i64 q : inst.places.s0) {  // s0 is kept ascending, 2 first
        if (splitting_type(inst.d, Place::finite(q)) != SplittingType::split)
            cols.push_back(Place::finite(q));
    }
    if (inst.places.s_inf && inst.d < 0) cols.push_back(Place::infinity());
    return cols;
}

struct RowSystem {
    GoverningBasis basis;
    SubgroupWT wt;
    std::vector<i64> class_reps;      // product of odd-exponent generators
    std::vector<std::string> labels;  // witness labels, parallel to wt.basis
};

inline RowSystem row_system(const ProblemInstance& inst) {
    RowSystem rs;
    rs.basis = governing_basis(inst.places);
    rs.wt = wt_subgroup(rs.basis, inst.places.t);
    for (std::size_t i = 0; i < rs.wt.dim(); ++i) {
        rs.class_reps.push_back(witness_class_rep(rs.basis, rs.wt.basis[i]));
        rs.labels.push_back(witness_label(rs.basis, rs.wt.witnesses[i]));
    }
    return rs;
}

inline MatrixFp labelled_matrix(const RowSystem& rs, const std::vector<Place>& cols) {
    MatrixFp m = MatrixFp::zero(2, rs.wt.dim(), cols.size());
    for (const Place& v : cols) m.col_labels.push_back(v.str());
    m.row_labels = rs.labels;
    return m;
}

}  // namespace detail

/// Symbol matrix over F2 via the local case rules, one row per basis element
/// w of the T-congruent subgroup, one column per non-split place:
///   - odd ramified q:      additive Legendre symbol (w / q);
///   - ramified 2:          nontrivial iff the square class of w is not a
///                          local norm (membership in w2_norm_classes(d));
///   - non-split finite S:  parity of the valuation of w at the place;
///   - non-split real place: nontrivial iff w < 0.
/// Split S-places pair trivially and contribute no column.
inline MatrixFp build_matrix_caserule(const ProblemInstance& inst) {
    auto rs = detail::row_system(inst);
    auto cols = detail::column_plan(inst);
    MatrixFp m = detail::labelled_matrix(rs, cols);

    std::set<SquareClass2> w2;  // needed only when a ramified-2 entry is evaluated
    if (rs.wt.dim() > 0 && !inst.sigma.empty() && inst.sigma.front() == 2)
        w2 = w2_norm_classes(inst.d);

    const auto& gens = rs.basis.gens;
    for (std::size_t r = 0; r < rs.wt.dim(); ++r) {
        const auto& w = rs.wt.basis[r];
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const Place& v = cols[c];
            f2 entry = 0;
            switch (v.kind) {
                case PlaceKind::odd_prime: {
                    if (std::binary_search(inst.sigma.begin(), inst.sigma.end(), v.q)) {
                        for (std::size_t j = 0; j < gens.size(); ++j)
                            if (w[j]) entry ^= legendre_add(gens[j], v.q);
                    } else {
                        // inert S-place: only the place's own valuation shows
                        for (std::size_t j = 0; j < gens.size(); ++j)
                            if (gens[j] == v.q) entry = w[j];
                    }
                    break;
                }
                case PlaceKind::two: {
                    if (!inst.sigma.empty() && inst.sigma.front() == 2) {
                        SquareClass2 cls{0, 1};
                        for (std::size_t j = 0; j < gens.size(); ++j)
                            if (w[j]) cls = cls * SquareClass2::of(gens[j]);
                        detail::require(cls.val2 == 0, errc::internal_check,
                                        "even square class at a ramified 2-column");
                        entry = w2.count(cls) ? 0 : 1;
                    } else {
                        // inert 2 in S0: valuation parity, as at odd S-places
                        for (std::size_t j = 0; j < gens.size(); ++j)
                            if (gens[j] == 2) entry = w[j];
                    }
                    break;
                }
                case PlaceKind::infinity: {
                    // column exists only for d < 0 with the real place in S
                    if (!gens.empty() && gens[0] == -1) entry = w[0];
                    break;
                }
            }
            m.set(r, c, entry);
        }
    }
    return m;
}

/// Full genus computation: matrix, rank, kernel size g = 2^(#cols - rank),
/// the ray-class scaled variant g*, and per-place diagnostics.
struct GenusReport {
    MatrixFp matrix;
    std::size_t rank = 0;
    std::size_t log2_g = 0;
    u64 g = 1;
    u64 g_star = 1;
    u64 ray_class_order = 1;
    std::vector<std::pair<std::string, SplittingType>> splitting;
    std::vector<std::vector<std::string>> kernel_basis;  // column-label subsets
};

inline GenusReport genus_number(const ProblemInstance& inst) {
    GenusReport rep;
    rep.matrix = build_matrix_caserule(inst);
    rep.rank = rank_fp(rep.matrix);
    rep.log2_g = rep.matrix.ncols - rep.rank;
    detail::require(rep.log2_g < 63, errc::value_out_of_range, "genus number overflows 64 bits");
    rep.g = 1ull << rep.log2_g;

    i64 modulus = 1;
    for (i64 t : inst.places.t)
        modulus = detail::checked_mul(modulus, t, errc::value_out_of_range,
                                      "T modulus overflows");
    rep.ray_class_order = stgenus::ray_class_order(modulus, inst.places);
    unsigned __int128 scaled = static_cast<unsigned __int128>(rep.g) * rep.ray_class_order;
    detail::require(scaled % 2 == 0, errc::internal_check,
                    "g * rayClassOrder must be even (L lies inside its genus field)");
    detail::require(scaled / 2 <= UINT64_MAX, errc::value_out_of_range, "g* overflows 64 bits");
    rep.g_star = static_cast<u64>(scaled / 2);

    for (i64 q : inst.sigma) {
        Place v = Place::finite(q);
        rep.splitting.emplace_back(v.str(), splitting_type(inst.d, v));
    }
    for (i64 q : inst.places.s0) {
        Place v = Place::finite(q);
        rep.splitting.emplace_back(v.str(), splitting_type(inst.d, v));
    }
    if (inst.places.s_inf)
        rep.splitting.emplace_back("inf", splitting_type(inst.d, Place::infinity()));

    for (const auto& vec : kernel_basis_fp(rep.matrix)) {
        std::vector<std::string> subset;
        for (std::size_t c = 0; c < vec.size(); ++c)
            if (vec[c]) subset.push_back(rep.matrix.col_labels[c]);
        rep.kernel_basis.push_back(std::move(subset));
    }
    return rep;
}

}  // namespace stgenus
