#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "stgenus/genus.hpp"
#include "stgenus/selftest.hpp"

using namespace stgenus;

namespace {

ProblemInstance instance(i64 d, std::vector<i64> s0, bool s_inf, std::vector<i64> t) {
    return ProblemInstance::make(d, PlaceSets::make(std::move(s0), s_inf, std::move(t)));
}

}  // namespace

TEST_CASE("ramified places of the quadratic field") {
    CHECK(ramification_set(21) == std::vector<i64>{3, 7});    // 21 = 1 mod 4
    CHECK(ramification_set(-21) == std::vector<i64>{2, 3, 7});
    CHECK(ramification_set(65) == std::vector<i64>{5, 13});
    CHECK(ramification_set(-1) == std::vector<i64>{2});
    CHECK(ramification_set(2) == std::vector<i64>{2});
    CHECK(ramification_set(-3) == std::vector<i64>{3});       // -3 = 1 mod 4
    CHECK(ramification_set(6) == std::vector<i64>{2, 3});

    CHECK_THROWS_AS(ramification_set(0), Error);
    CHECK_THROWS_AS(ramification_set(1), Error);
    try {
        ramification_set(12);
        FAIL("expected NotSquarefree");
    } catch (const Error& e) {
        CHECK(e.code() == errc::not_squarefree);
    }
}

TEST_CASE("unit square classes of local norms at 2") {
    using S = SquareClass2;
    CHECK(w2_norm_classes(-17) == std::set<S>{S{0, 1}, S{0, 5}});
    CHECK(w2_norm_classes(-21) == std::set<S>{S{0, 1}, S{0, 5}});
    CHECK(w2_norm_classes(-1) == std::set<S>{S{0, 1}, S{0, 5}});
    CHECK(w2_norm_classes(-2) == std::set<S>{S{0, 1}, S{0, 3}});
    CHECK(w2_norm_classes(17) ==
          std::set<S>{S{0, 1}, S{0, 3}, S{0, 5}, S{0, 7}});  // 2 splits, every unit is a norm
    CHECK(w2_norm_classes(-15) ==
          std::set<S>{S{0, 1}, S{0, 3}, S{0, 5}, S{0, 7}});

    // norms form a group: the set is closed under multiplication
    for (i64 d : {-21, -17, -5, -2, -1, 2, 3, 6, 17, 21}) {
        auto cls = w2_norm_classes(d);
        for (const auto& a : cls)
            for (const auto& b : cls) CHECK(cls.count(a * b) == 1);
        CHECK(cls.count(SquareClass2{0, 1}) == 1);
        // every unit is a norm exactly when 2 is unramified (d = 1 mod 4);
        // when 2 ramifies the norm units have index 2
        CHECK((cls.size() == 2 || cls.size() == 4));
        CHECK((cls.size() == 4) == (detail::umod(d, 4) == 1));
    }
}

TEST_CASE("instance validation") {
    CHECK_NOTHROW(instance(21, {5}, true, {11}));
    try {
        instance(21, {3}, false, {});
        FAIL("expected Overlap");
    } catch (const Error& e) {
        CHECK(e.code() == errc::overlap);
    }
    CHECK_THROWS_AS(instance(21, {}, false, {7}), Error);   // 7 ramifies
    CHECK_THROWS_AS(instance(-21, {2}, false, {}), Error);  // 2 ramifies
    CHECK_THROWS_AS(instance(12, {}, false, {}), Error);
    CHECK_THROWS_AS(instance(0, {}, false, {}), Error);
}

TEST_CASE("symbol matrix for d = -21 with the real place relaxed") {
    auto m = build_matrix_caserule(instance(-21, {}, true, {}));
    REQUIRE(m.nrows == 1);
    REQUIRE(m.ncols == 4);
    CHECK(m.col_labels == std::vector<std::string>{"3", "7", "2", "inf"});
    CHECK(m.row_labels == std::vector<std::string>{"-1"});
    CHECK(m.a == std::vector<std::uint8_t>{1, 1, 1, 1});
}

TEST_CASE("symbol matrix for d = 65 with an inert S-place") {
    auto m = build_matrix_caserule(instance(65, {3}, true, {}));
    REQUIRE(m.nrows == 2);
    REQUIRE(m.ncols == 3);
    CHECK(m.col_labels == std::vector<std::string>{"5", "13", "3"});
    CHECK(m.row_labels == std::vector<std::string>{"-1", "3"});
    // row of -1: -1 is a square mod 5 and mod 13, and has valuation 0 at 3
    CHECK(m.a == std::vector<std::uint8_t>{0, 0, 0, 1, 0, 1});
}

TEST_CASE("symbol matrix for d = 21") {
    auto m = build_matrix_caserule(instance(21, {}, true, {}));
    REQUIRE(m.nrows == 1);
    REQUIRE(m.ncols == 2);  // d > 0: the real place splits, no column
    CHECK(m.col_labels == std::vector<std::string>{"3", "7"});
    CHECK(m.a == std::vector<std::uint8_t>{1, 1});
}

TEST_CASE("genus number fixtures") {
    auto rep = genus_number(instance(21, {}, true, {}));
    CHECK(rep.g == 2);
    CHECK(rep.log2_g == 1);
    CHECK(rep.rank == 1);
    CHECK(rep.ray_class_order == 1);
    CHECK(rep.g_star == 1);

    rep = genus_number(instance(-21, {}, true, {}));
    CHECK(rep.g == 8);
    CHECK(rep.matrix.ncols == 4);
    CHECK(rep.rank == 1);

    rep = genus_number(instance(65, {3}, true, {}));
    CHECK(rep.g == 4);

    // no relaxed places at all: zero rows, full kernel
    rep = genus_number(instance(-21, {}, false, {}));
    CHECK(rep.matrix.nrows == 0);
    CHECK(rep.g == 8);

    rep = genus_number(instance(-3, {}, true, {}));
    CHECK(rep.g == 2);

    rep = genus_number(instance(-1, {}, true, {}));
    CHECK(rep.g == 2);
    CHECK(rep.matrix.ncols == 2);
    CHECK(rep.matrix.a == std::vector<std::uint8_t>{1, 1});
}

TEST_CASE("kernel basis reported as column subsets") {
    auto rep = genus_number(instance(-21, {}, true, {}));
    REQUIRE(rep.kernel_basis.size() == 3);
    CHECK(rep.kernel_basis[0] == std::vector<std::string>{"3", "7"});
    CHECK(rep.kernel_basis[1] == std::vector<std::string>{"3", "2"});
    CHECK(rep.kernel_basis[2] == std::vector<std::string>{"3", "inf"});
}

TEST_CASE("splitting diagnostics") {
    auto rep = genus_number(instance(65, {3}, true, {}));
    REQUIRE(rep.splitting.size() == 4);
    CHECK(rep.splitting[0] == std::pair<std::string, SplittingType>{"5", SplittingType::ramified});
    CHECK(rep.splitting[1] == std::pair<std::string, SplittingType>{"13", SplittingType::ramified});
    CHECK(rep.splitting[2] == std::pair<std::string, SplittingType>{"3", SplittingType::inert});
    CHECK(rep.splitting[3] == std::pair<std::string, SplittingType>{"inf", SplittingType::split});

    rep = genus_number(instance(-21, {}, true, {}));
    CHECK(rep.splitting.back() ==
          std::pair<std::string, SplittingType>{"inf", SplittingType::inert});
}

TEST_CASE("ray-class scaled genus number with congruence conditions") {
    // d = -1, S = {inf}, T = {7}: the congruence subgroup is trivial, so the
    // matrix has no rows and g = 2^ncols = 4; the ray class group mod 7 with
    // the real place relaxed has order 3.
    auto rep = genus_number(instance(-1, {}, true, {7}));
    CHECK(rep.matrix.nrows == 0);
    REQUIRE(rep.matrix.ncols == 2);
    CHECK(rep.g == 4);
    CHECK(rep.ray_class_order == 3);
    CHECK(rep.g_star == 6);  // not a power of two
}

TEST_CASE("adding a split place never grows the genus number") {
    // A split S-place contributes a row but no column, so the kernel can only
    // shrink, and by at most one elimination step.
    auto base = genus_number(instance(-21, {}, true, {}));
    for (i64 q : {5, 11, 17, 37}) {
        if (splitting_type(-21, Place::finite(q)) != SplittingType::split) continue;
        auto grown = genus_number(instance(-21, {q}, true, {}));
        CHECK(grown.matrix.ncols == base.matrix.ncols);
        CHECK((grown.g == base.g || grown.g * 2 == base.g));
    }
    for (const auto& inst : random_instances(0x600d, 40)) {
        if (!inst.places.t.empty()) continue;
        auto before = genus_number(inst);
        for (i64 q = 3; q < 60; q += 2) {
            if (!is_prime(static_cast<u64>(q))) continue;
            if (std::binary_search(inst.sigma.begin(), inst.sigma.end(), q)) continue;
            if (std::binary_search(inst.places.s0.begin(), inst.places.s0.end(), q)) continue;
            if (splitting_type(inst.d, Place::odd(q)) != SplittingType::split) continue;
            auto s0 = inst.places.s0;
            s0.push_back(q);
            auto after = genus_number(instance(inst.d, s0, inst.places.s_inf, {}));
            REQUIRE(after.matrix.ncols == before.matrix.ncols);
            REQUIRE((after.g == before.g || after.g * 2 == before.g));
            break;
        }
    }
}

TEST_CASE("kernel dimension bounds on random instances") {
    for (const auto& inst : random_instances(0xb0b, 80)) {
        auto rep = genus_number(inst);
        const std::size_t ncols = rep.matrix.ncols;
        const std::size_t nrows = rep.matrix.nrows;
        REQUIRE(rep.log2_g <= ncols);
        REQUIRE(rep.log2_g + std::min(nrows, ncols) >= ncols);
        REQUIRE(rep.g == (1ull << rep.log2_g));
        // the trivial class is always in the kernel: g >= 1, and with at
        // least one ramified place and no relaxation, g = 2^ncols
        if (nrows == 0) REQUIRE(rep.log2_g == ncols);
    }
}
