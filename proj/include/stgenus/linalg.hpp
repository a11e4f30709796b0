#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"

/// Dense exact linear algebra mod a small prime p (2 <= p <= 251), sized for
/// symbol matrices with a handful of rows and columns.  Mod-2 elimination
/// runs on rows packed into 64-bit words; odd p uses a plain byte sweep.
/// Also: kernels of integer exponent maps into products of cyclic groups.

namespace stgenus {

struct MatrixFp {
    int p = 2;
    std::size_t nrows = 0;
    std::size_t ncols = 0;
    std::vector<std::uint8_t> a;  // row-major, entries in [0, p)
    std::vector<std::string> row_labels;  // empty, or one per row
    std::vector<std::string> col_labels;  // empty, or one per column

    static MatrixFp zero(int p, std::size_t nrows, std::size_t ncols) {
        MatrixFp m;
        m.p = p;
        m.nrows = nrows;
        m.ncols = ncols;
        m.a.assign(nrows * ncols, 0);
        m.validate();
        return m;
    }

    std::uint8_t at(std::size_t r, std::size_t c) const { return a[r * ncols + c]; }
    void set(std::size_t r, std::size_t c, std::uint8_t v) { a[r * ncols + c] = v; }

    void validate() const {
        detail::require(p >= 2 && p <= 251, errc::value_out_of_range,
                        "matrix modulus out of range: " + std::to_string(p));
        bool prime = true;
        for (int q = 2; q * q <= p; ++q)
            if (p % q == 0) prime = false;
        detail::require(prime, errc::value_out_of_range,
                        "matrix modulus must be prime: " + std::to_string(p));
        detail::require(a.size() == nrows * ncols, errc::dimension_mismatch,
                        "entry count does not match the declared shape");
        for (auto v : a)
            detail::require(v < p, errc::value_out_of_range, "matrix entry not reduced mod p");
        detail::require(row_labels.empty() || row_labels.size() == nrows, errc::dimension_mismatch,
                        "row label count mismatch");
        detail::require(col_labels.empty() || col_labels.size() == ncols, errc::dimension_mismatch,
                        "column label count mismatch");
    }

    bool same_entries(const MatrixFp& o) const {
        return p == o.p && nrows == o.nrows && ncols == o.ncols && a == o.a;
    }

    bool operator==(const MatrixFp&) const = default;
};

namespace detail {

inline std::uint8_t inv_mod(int a, int p) {
    // p <= 251 is prime, so Fermat suffices.
    int r = 1, b = a % p, e = p - 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return static_cast<std::uint8_t>(r);
}

/// Reduced row echelon form in place (byte entries); returns pivot columns in
/// ascending order.  Mod 2 the sweep works on packed words instead.
inline std::vector<std::size_t> rref_bytes(std::vector<std::uint8_t>& a, std::size_t nrows,
                                           std::size_t ncols, int p) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < ncols && row < nrows; ++col) {
        std::size_t sel = row;
        while (sel < nrows && a[sel * ncols + col] == 0) ++sel;
        if (sel == nrows) continue;
        for (std::size_t c = 0; c < ncols; ++c)
            std::swap(a[sel * ncols + c], a[row * ncols + c]);
        std::uint8_t inv = inv_mod(a[row * ncols + col], p);
        for (std::size_t c = 0; c < ncols; ++c)
            a[row * ncols + c] = static_cast<std::uint8_t>(a[row * ncols + c] * inv % p);
        for (std::size_t r = 0; r < nrows; ++r) {
            if (r == row) continue;
            int f = a[r * ncols + col];
            if (f == 0) continue;
            for (std::size_t c = 0; c < ncols; ++c) {
                int v = a[r * ncols + c] - f * a[row * ncols + c] % p;
                a[r * ncols + c] = static_cast<std::uint8_t>((v % p + p) % p);
            }
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

/// Packed mod-2 RREF: each row is ceil(ncols/64) words, eliminated by
/// word-parallel XOR.  Returns pivot columns ascending; unpacks the result
/// back into the byte array so both paths agree bit for bit.
inline std::vector<std::size_t> rref_f2(std::vector<std::uint8_t>& a, std::size_t nrows,
                                        std::size_t ncols) {
    const std::size_t words = (ncols + 63) / 64;
    std::vector<std::uint64_t> rows(nrows * words, 0);
    for (std::size_t r = 0; r < nrows; ++r)
        for (std::size_t c = 0; c < ncols; ++c)
            if (a[r * ncols + c]) rows[r * words + c / 64] |= 1ull << (c % 64);

    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < ncols && row < nrows; ++col) {
        const std::size_t w = col / 64;
        const std::uint64_t bit = 1ull << (col % 64);
        std::size_t sel = row;
        while (sel < nrows && !(rows[sel * words + w] & bit)) ++sel;
        if (sel == nrows) continue;
        for (std::size_t i = 0; i < words; ++i)
            std::swap(rows[sel * words + i], rows[row * words + i]);
        for (std::size_t r = 0; r < nrows; ++r) {
            if (r != row && (rows[r * words + w] & bit))
                for (std::size_t i = 0; i < words; ++i)
                    rows[r * words + i] ^= rows[row * words + i];
        }
        pivots.push_back(col);
        ++row;
    }
    for (std::size_t r = 0; r < nrows; ++r)
        for (std::size_t c = 0; c < ncols; ++c)
            a[r * ncols + c] = (rows[r * words + c / 64] >> (c % 64)) & 1;
    return pivots;
}

inline std::vector<std::size_t> rref(std::vector<std::uint8_t>& a, std::size_t nrows,
                                     std::size_t ncols, int p) {
    return p == 2 ? rref_f2(a, nrows, ncols) : rref_bytes(a, nrows, ncols, p);
}

}  // namespace detail

inline std::size_t rank_fp(const MatrixFp& m) {
    m.validate();
    auto work = m.a;
    return detail::rref(work, m.nrows, m.ncols, m.p).size();
}

inline std::size_t kernel_dim_fp(const MatrixFp& m) { return m.ncols - rank_fp(m); }

/// Basis of the right kernel in reduced column-echelon order: one vector per
/// free column, taken ascending, each with a 1 in its free position.  The RREF
/// is unique, so this basis is a deterministic function of the matrix.
inline std::vector<std::vector<std::uint8_t>> kernel_basis_fp(const MatrixFp& m) {
    m.validate();
    auto work = m.a;
    auto pivots = detail::rref(work, m.nrows, m.ncols, m.p);
    std::vector<bool> is_pivot(m.ncols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<std::uint8_t>> basis;
    for (std::size_t f = 0; f < m.ncols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<std::uint8_t> v(m.ncols, 0);
        v[f] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) {
            std::uint8_t coef = work[r * m.ncols + f];
            if (coef) v[pivots[r]] = static_cast<std::uint8_t>((m.p - coef) % m.p);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

/// A subspace of F_p^ambient given by an independent basis.
struct SubspaceFp {
    int p = 2;
    std::size_t ambient_dim = 0;
    std::vector<std::vector<std::uint8_t>> basis;

    static SubspaceFp make(int p, std::size_t ambient_dim,
                           std::vector<std::vector<std::uint8_t>> basis) {
        SubspaceFp s;
        s.p = p;
        s.ambient_dim = ambient_dim;
        s.basis = std::move(basis);
        MatrixFp m = MatrixFp::zero(p, s.basis.size(), ambient_dim);
        for (std::size_t r = 0; r < s.basis.size(); ++r) {
            detail::require(s.basis[r].size() == ambient_dim, errc::dimension_mismatch,
                            "basis vector length mismatch");
            for (std::size_t c = 0; c < ambient_dim; ++c) m.set(r, c, s.basis[r][c]);
        }
        detail::require(rank_fp(m) == s.basis.size(), errc::not_independent,
                        "subspace basis is linearly dependent");
        return s;
    }

    std::size_t dim() const { return basis.size(); }
};

/// log_p of the number of x with A x in span(B):
///   ncols(A) - rank([A | B]) + rank(B),
/// where the basis of B is appended to A as extra columns.
inline std::size_t preimage_count_exp(const MatrixFp& a, const SubspaceFp& b) {
    detail::require(a.p == b.p, errc::dimension_mismatch, "mismatched moduli");
    detail::require(a.nrows == b.ambient_dim, errc::dimension_mismatch,
                    "subspace does not live in the codomain of the matrix");
    const std::size_t k = b.basis.size();
    MatrixFp aug = MatrixFp::zero(a.p, a.nrows, a.ncols + k);
    for (std::size_t r = 0; r < a.nrows; ++r) {
        for (std::size_t c = 0; c < a.ncols; ++c) aug.set(r, c, a.at(r, c));
        for (std::size_t j = 0; j < k; ++j) aug.set(r, a.ncols + j, b.basis[j][r]);
    }
    MatrixFp bm = MatrixFp::zero(b.p, k, b.ambient_dim);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < b.ambient_dim; ++c) bm.set(r, c, b.basis[r][c]);
    return a.ncols - rank_fp(aug) + rank_fp(bm);
}

namespace detail {

struct Egcd {
    i64 g, x, y;  // g = gcd(a, b) = x a + y b
};

inline Egcd egcd(i64 a, i64 b) {
    if (b == 0) return {a, 1, 0};
    Egcd e = egcd(b, a % b);
    return {e.g, e.y, e.x - (a / b) * e.y};
}

inline i64 checked_addmul(i64 acc, i64 a, i64 b) {
    __int128 v = static_cast<__int128>(acc) + static_cast<__int128>(a) * b;
    require(v <= INT64_MAX && v >= INT64_MIN, errc::value_out_of_range,
            "integer overflow in exact lattice sweep");
    return static_cast<i64>(v);
}

}  // namespace detail

/// Kernel of the exponent map Z^n -> prod_i Z/orders[i] sending e to
/// sum_j dlogs[i][j] * e_j in each factor.  dlogs has one row per cyclic
/// factor and one column per generator.  Returns n integer vectors spanning
/// the kernel lattice (it always has full rank: each factor only cuts out a
/// finite-index sublattice).  Empty orders yield the identity on n generators.
inline std::vector<std::vector<i64>> congruence_kernel(std::size_t n,
                                                       const std::vector<std::vector<i64>>& dlogs,
                                                       const std::vector<i64>& orders) {
    detail::require(dlogs.size() == orders.size(), errc::dimension_mismatch,
                    "one dlog row per cyclic factor required");
    for (const auto& row : dlogs)
        detail::require(row.size() == n, errc::dimension_mismatch, "ragged dlog matrix");

    // Basis of the running kernel lattice, initially Z^n.
    std::vector<std::vector<i64>> basis(n);
    for (std::size_t j = 0; j < n; ++j) {
        basis[j].assign(n, 0);
        basis[j][j] = 1;
    }

    for (std::size_t i = 0; i < orders.size(); ++i) {
        const i64 m = orders[i];
        detail::require(m >= 1, errc::value_out_of_range, "cyclic order must be >= 1");
        if (m == 1) continue;
        // Value of the i-th linear form on each current basis vector, mod m.
        std::vector<i64> v(n, 0);
        for (std::size_t j = 0; j < n; ++j) {
            i64 acc = 0;
            for (std::size_t c = 0; c < n; ++c)
                acc = detail::checked_addmul(acc, detail::umod(dlogs[i][c], m), basis[j][c]);
            v[j] = detail::umod(acc, m);
        }
        std::size_t j0 = 0;
        while (j0 < n && v[j0] == 0) ++j0;
        if (j0 == n) continue;  // form already vanishes on the lattice
        // Unimodular column sweep: concentrate gcd(v) at position j0.
        for (std::size_t j = j0 + 1; j < n; ++j) {
            if (v[j] == 0) continue;
            auto e = detail::egcd(v[j0], v[j]);
            std::vector<i64> b0(n), bj(n);
            for (std::size_t c = 0; c < n; ++c) {
                b0[c] = detail::checked_addmul(detail::checked_addmul(0, e.x, basis[j0][c]), e.y,
                                               basis[j][c]);
                bj[c] = detail::checked_addmul(detail::checked_addmul(0, -(v[j] / e.g), basis[j0][c]),
                                               v[j0] / e.g, basis[j][c]);
            }
            basis[j0] = std::move(b0);
            basis[j] = std::move(bj);
            v[j0] = e.g;
            v[j] = 0;
        }
        // Kernel of c * v[j0] = 0 mod m in the j0 coordinate.
        i64 step = m / std::gcd(v[j0], m);
        for (auto& c : basis[j0])
            c = detail::checked_mul(c, step, errc::value_out_of_range,
                                    "integer overflow in exact lattice sweep");
    }
    return basis;
}

}  // namespace stgenus
