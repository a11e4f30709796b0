#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "stgenus/arith.hpp"
#include "stgenus/genus.hpp"

using namespace stgenus;

TEST_CASE("primality is deterministic and exact") {
    CHECK(is_prime(2));
    CHECK_FALSE(is_prime(0));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(561));  // Carmichael
    CHECK(is_prime(3));
    CHECK(is_prime(97));
    CHECK_FALSE(is_prime(97 * 89));
    CHECK(is_prime(2147483647ull));            // 2^31 - 1
    CHECK(is_prime(18446744073709551557ull));  // largest 64-bit prime
    CHECK_FALSE(is_prime(18446744073709551556ull));
    // agree with trial division on a dense range
    for (u64 n = 2; n < 2000; ++n) {
        bool divides = false;
        for (u64 p = 2; p * p <= n; ++p)
            if (n % p == 0) divides = true;
        CHECK(is_prime(n) == !divides);
    }
}

TEST_CASE("squarefree factorization") {
    auto f = factor_squarefree(21);
    CHECK(f.sign == 1);
    CHECK(f.primes == std::vector<i64>{3, 7});

    f = factor_squarefree(-21);
    CHECK(f.sign == -1);
    CHECK(f.primes == std::vector<i64>{3, 7});

    f = factor_squarefree(1);
    CHECK(f.sign == 1);
    CHECK(f.primes.empty());

    f = factor_squarefree(-2);
    CHECK(f.sign == -1);
    CHECK(f.primes == std::vector<i64>{2});

    CHECK_THROWS_AS(factor_squarefree(12), Error);
    CHECK_THROWS_AS(factor_squarefree(0), Error);
    CHECK_THROWS_AS(factor_squarefree(-50), Error);
    try {
        factor_squarefree(12);
        FAIL("expected NotSquarefree");
    } catch (const Error& e) {
        CHECK(e.code() == errc::not_squarefree);
    }

    // large semiprime via the rho path
    f = factor_squarefree(1000003ll * 999983ll);
    CHECK(f.primes == std::vector<i64>{999983, 1000003});
}

TEST_CASE("additive Legendre symbol") {
    for (i64 q : {3, 5, 7, 11, 97}) CHECK(legendre_add(1, q) == 0);
    CHECK(legendre_add(-1, 5) == 0);  // squares mod 5 are {1,4}
    CHECK(legendre_add(-1, 3) == 1);  // squares mod 3 are {1}
    for (i64 l : {5, 13, 17, 29, 97}) CHECK(legendre_add(-1, l) == 0);  // l = 1 mod 4
    for (i64 l : {3, 7, 11, 19, 23}) CHECK(legendre_add(-1, l) == 1);   // l = 3 mod 4

    try {
        legendre_add(6, 3);
        FAIL("expected NotCoprime");
    } catch (const Error& e) {
        CHECK(e.code() == errc::not_coprime);
    }
    try {
        legendre_add(5, 4);
        FAIL("expected InvalidPlace");
    } catch (const Error& e) {
        CHECK(e.code() == errc::invalid_place);
    }
    CHECK_THROWS_AS(legendre_add(5, 2), Error);
}

TEST_CASE("Legendre agrees with square enumeration below 1000") {
    for (i64 q = 3; q < 1000; q += 2) {
        if (!is_prime(static_cast<u64>(q))) continue;
        std::vector<char> sq(static_cast<std::size_t>(q), 0);
        for (i64 s = 1; s < q; ++s) sq[static_cast<std::size_t>(s * s % q)] = 1;
        for (i64 a = 1; a < q; ++a)
            REQUIRE(legendre_add(a, q) == (sq[static_cast<std::size_t>(a)] ? 0 : 1));
    }
}

TEST_CASE("Legendre is additive in the numerator") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        const i64 q = std::vector<i64>{3, 5, 7, 11, 13, 997}[rng() % 6];
        i64 a = static_cast<i64>(rng() % 1000) - 500;
        i64 b = static_cast<i64>(rng() % 1000) - 500;
        if (a == 0 || b == 0 || a % q == 0 || b % q == 0) continue;
        CHECK(legendre_add(a * b, q) == (legendre_add(a, q) ^ legendre_add(b, q)));
    }
}

TEST_CASE("Kronecker symbol") {
    CHECK(kronecker(13, 3) == 1);
    for (i64 a : {-7, -1, 2, 5, 13}) CHECK(kronecker(a, 1) == 1);
    CHECK(kronecker(17, 2) == 1);  // 17 = 1 mod 8
    CHECK(kronecker(5, 2) == -1);  // 5 = 5 mod 8
    CHECK(kronecker(6, 2) == 0);
    CHECK(kronecker(4, 6) == 0);
    // multiplicative in both arguments
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        const i64 a = static_cast<i64>(rng() % 60) - 30;
        const i64 b = static_cast<i64>(rng() % 60) - 30;
        const i64 n = static_cast<i64>(rng() % 40) + 1;
        CHECK(kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n));
    }
    // consistency with Legendre at odd primes
    for (i64 q : {3, 5, 7, 11, 13}) {
        for (i64 a = 1; a < q; ++a)
            CHECK(kronecker(a, q) == (legendre_add(a, q) == 0 ? 1 : -1));
    }
}

TEST_CASE("Place construction") {
    CHECK(Place::odd(7).str() == "7");
    CHECK(Place::two().str() == "2");
    CHECK(Place::infinity().str() == "inf");
    CHECK(Place::finite(2) == Place::two());
    CHECK(Place::finite(13) == Place::odd(13));
    CHECK_THROWS_AS(Place::odd(2), Error);
    CHECK_THROWS_AS(Place::odd(9), Error);
    CHECK_THROWS_AS(Place::odd(-3), Error);
    CHECK_THROWS_AS(Place::finite(15), Error);
}

TEST_CASE("square classes in Q_2") {
    CHECK(SquareClass2::of(1) == SquareClass2{0, 1});
    CHECK(SquareClass2::of(8) == SquareClass2{1, 1});    // 8 = 2 * 4
    CHECK(SquareClass2::of(-3) == SquareClass2{0, 5});   // -3 = 5 mod 8
    CHECK(SquareClass2::of(-1) == SquareClass2{0, 7});
    CHECK(SquareClass2::of(12) == SquareClass2{0, 3});   // 12 = 3 * 4
    CHECK(SquareClass2::of(2) * SquareClass2::of(6) == SquareClass2::of(12));
    CHECK_THROWS_AS(SquareClass2::of(0), Error);
    // class is a square-class invariant
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        const i64 a = static_cast<i64>(rng() % 2000) - 1000;
        const i64 s = static_cast<i64>(rng() % 30) + 1;
        if (a == 0) continue;
        CHECK(SquareClass2::of(a * s * s) == SquareClass2::of(a));
    }
}

TEST_CASE("Hilbert symbol closed forms") {
    for (i64 b : {1, -1, 2, 7, -15}) {
        CHECK(hilbert_add(1, b, Place::two()) == 0);
        CHECK(hilbert_add(1, b, Place::infinity()) == 0);
        CHECK(hilbert_add(1, b, Place::odd(5)) == 0);
    }
    CHECK(hilbert_add(-1, -1, Place::two()) == 1);
    CHECK(hilbert_add(-1, -1, Place::infinity()) == 1);
    CHECK(hilbert_add(5, 2, Place::two()) == 1);
    CHECK(hilbert_add(-1, 21, Place::odd(3)) == 1);
    CHECK(hilbert_add(2, 7, Place::two()) == 0);  // 3^2 = 2 + 7

    try {
        hilbert_add(0, 3, Place::two());
        FAIL("expected ZeroArgument");
    } catch (const Error& e) {
        CHECK(e.code() == errc::zero_argument);
    }
}

TEST_CASE("Hilbert symbol is symmetric and bi-additive") {
    const std::vector<i64> vals = {1, -1, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7, 10, -10, 15, -15};
    std::vector<Place> places = {Place::infinity(), Place::two(), Place::odd(3), Place::odd(5),
                                 Place::odd(7)};
    for (i64 a : vals)
        for (i64 b : vals)
            for (const Place& v : places) {
                CHECK(hilbert_add(a, b, v) == hilbert_add(b, a, v));
                for (i64 c : {-1, 2, 15})
                    CHECK(hilbert_add(a * c, b, v) ==
                          (hilbert_add(a, b, v) ^ hilbert_add(c, b, v)));
            }
}

TEST_CASE("Hilbert product formula over all places") {
    const std::vector<i64> vals = {1, -1, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7, 10, -10, 15, -15};
    for (i64 a : vals) {
        for (i64 b : vals) {
            f2 total = hilbert_add(a, b, Place::infinity()) ^ hilbert_add(a, b, Place::two());
            for (i64 q : {3, 5, 7}) {
                if ((a * b) % q == 0) total ^= hilbert_add(a, b, Place::odd(q));
            }
            CHECK(total == 0);
        }
    }
}

TEST_CASE("Hilbert symbol on rational arguments uses square classes") {
    // n/d is the class of n*d, so (1/2, b) must match (2, b)
    for (i64 b : {3, -5, 7}) {
        CHECK(hilbert_add(1, 2, b, 1, Place::two()) == hilbert_add(2, b, Place::two()));
        CHECK(hilbert_add(3, 4, b, 1, Place::odd(3)) == hilbert_add(3, b, Place::odd(3)));
    }
    CHECK_THROWS_AS(hilbert_add(1, 0, 3, 1, Place::two()), Error);
}

TEST_CASE("splitting types") {
    CHECK(splitting_type(5, Place::infinity()) == SplittingType::split);
    CHECK(splitting_type(-5, Place::infinity()) == SplittingType::inert);
    CHECK(splitting_type(-21, Place::odd(3)) == SplittingType::ramified);
    CHECK(splitting_type(13, Place::odd(3)) == SplittingType::split);
    CHECK(splitting_type(5, Place::odd(3)) == SplittingType::inert);
    // -15 = 1 mod 8, so 2 splits; confirmed by the 2-adic norm sweep below
    CHECK(splitting_type(-15, Place::two()) == SplittingType::split);
    CHECK(w2_norm_classes(-15).size() == 4);
    CHECK(splitting_type(-3, Place::two()) == SplittingType::inert);   // -3 = 5 mod 8
    CHECK(splitting_type(-1, Place::two()) == SplittingType::ramified);
    CHECK(splitting_type(6, Place::two()) == SplittingType::ramified);

    CHECK_THROWS_AS(splitting_type(12, Place::two()), Error);
    try {
        splitting_type(0, Place::two());
        FAIL("expected InvalidDiscriminant");
    } catch (const Error& e) {
        CHECK(e.code() == errc::invalid_discriminant);
    }

    // ramified exactly at the ramification set, never at infinity
    for (i64 d : {-35, -21, -6, -1, 2, 3, 15, 30, 77}) {
        auto sigma = ramification_set(d);
        for (i64 p : {2, 3, 5, 7, 11}) {
            const bool in_sigma = std::find(sigma.begin(), sigma.end(), p) != sigma.end();
            CHECK((splitting_type(d, Place::finite(p)) == SplittingType::ramified) == in_sigma);
        }
        CHECK(splitting_type(d, Place::infinity()) != SplittingType::ramified);
    }
}
