#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "martlab/constructions.hpp"
#include "martlab/permutation.hpp"
#include "martlab/scanner.hpp"

using namespace martlab;

namespace {

PolynomialNat poly(std::vector<std::uint64_t> coeffs) { return PolynomialNat(std::move(coeffs)); }

struct NamedScanner {
    const char* name;
    ScanningFunction v;
    PolynomialNat g;  // a filling polynomial valid on the tested range
};

std::vector<NamedScanner> builtin_scanners() {
    return {
        {"identity", permutation_to_scanner(Permutation::identity()), poly({0, 1})},
        {"pair_swap", permutation_to_scanner(Permutation::pair_swap()), poly({1, 1})},
        {"block_rearrangement", permutation_to_scanner(rearrangement_permutation(poly({2, 1}))),
         poly({0, 2})},
    };
}

}  // namespace

TEST_CASE("builtin permutations invert on a window") {
    for (Permutation s : {Permutation::identity(), Permutation::pair_swap(),
                          rearrangement_permutation(poly({2, 1}))}) {
        for (std::uint64_t n = 0; n < 512; ++n) {
            CHECK(s.inverse(s.forward(n)) == n);
            CHECK(s.forward(s.inverse(n)) == n);
        }
    }
    // The dishonest permutation inverts too, but its preimages overflow
    // the 64-bit view; the exact route lives in the constructions tests.
    Permutation d = dishonest_permutation();
    for (std::uint64_t n = 0; n < 512; ++n) CHECK(d.inverse(d.forward(n)) == n);
}

TEST_CASE("table permutations act as identity outside their domain") {
    Permutation s = Permutation::table({{1, 10}, {10, 1}});
    CHECK(s.forward(1) == 10);
    CHECK(s.forward(10) == 1);
    CHECK(s.forward(5) == 5);
    CHECK(s.forward(11) == 11);
    CHECK(s.inverse(10) == 1);
    CHECK_THROWS_AS(Permutation::table({{0, 1}}), ParseError);       // 1 hit twice
    CHECK_THROWS_AS(Permutation::table({{0, 1}, {1, 1}}), ParseError);
}

TEST_CASE("scanner of a permutation queries by run length only") {
    ScanningFunction id = permutation_to_scanner(Permutation::identity());
    CHECK(id.query(BitString()) == 0);
    CHECK(id.query(BitString::parse("101")) == 3);

    ScanningFunction swap = permutation_to_scanner(Permutation::pair_swap());
    CHECK(swap.query(BitString()) == 1);
    CHECK(swap.query(BitString::parse("0")) == 0);
    CHECK(swap.query(BitString::parse("1")) == 0);

    ScanningFunction block = permutation_to_scanner(rearrangement_permutation(poly({2, 1})));
    CHECK(block.query(BitString()) == 0);
    CHECK(block.query(BitString::parse("1")) == 2);
    CHECK(block.query(BitString::parse("01")) == 1);
}

TEST_CASE("builtin scanners never repeat a query") {
    for (const NamedScanner& s : builtin_scanners()) {
        CAPTURE(s.name);
        CHECK(check_non_repetition(s.v, 10));
    }
}

TEST_CASE("table scanners validate non-repetition and totality") {
    std::map<std::string, std::uint64_t> ok{{"", 1}, {"0", 0}, {"1", 2}};
    ScanningFunction v = ScanningFunction::from_table(2, ok);
    CHECK(v.query(BitString::parse("1")) == 2);
    CHECK_THROWS_AS(v.query(BitString::parse("11")), EvalError);

    std::map<std::string, std::uint64_t> repeating{{"", 1}, {"0", 1}, {"1", 2}};
    CHECK_THROWS_AS(ScanningFunction::from_table(2, repeating), PreconditionError);
    std::map<std::string, std::uint64_t> partial{{"", 1}, {"0", 0}};
    CHECK_THROWS_AS(ScanningFunction::from_table(2, partial), ParseError);
}

TEST_CASE("composing with the identity scanner reproduces the sequence") {
    SequenceOracle z = SequenceOracle::pseudorandom(5);
    ScanningFunction id = permutation_to_scanner(Permutation::identity());
    CHECK(compose_with_scanner(z, id, 12) == z.prefix(12));
}

TEST_CASE("composing with the pair-swap scanner starts with the swapped bits") {
    SequenceOracle z = SequenceOracle::from_prefix(BitString::parse("0110"), 0);
    ScanningFunction swap = permutation_to_scanner(Permutation::pair_swap());
    BitString y = compose_with_scanner(z, swap, 4);
    CHECK(y.bit(0) == 1);  // Z(1)
    CHECK(y.bit(1) == 0);  // Z(0)
    CHECK(y.str() == "1001");
}

TEST_CASE("scanner composition agrees with positionwise permutation") {
    for (Permutation s : {Permutation::identity(), Permutation::pair_swap(),
                          rearrangement_permutation(poly({2, 1}))}) {
        SequenceOracle z = SequenceOracle::pseudorandom(9);
        ScanningFunction v = permutation_to_scanner(s);
        BitString y = compose_with_scanner(z, v, 20);
        for (std::size_t i = 0; i < 20; ++i) CHECK(y.bit(i) == z.bit(s.forward(i)));
    }
}

TEST_CASE("the empty run is consistent with everything") {
    for (const NamedScanner& s : builtin_scanners()) {
        for (std::uint64_t i = 0; i < 8; ++i)
            CHECK(consistent(s.v, BitString(), BitString::from_index(3, i)));
    }
}

TEST_CASE("identity consistency is prefix agreement") {
    ScanningFunction id = permutation_to_scanner(Permutation::identity());
    BitString w = BitString::parse("011");
    for (std::uint64_t i = 0; i < 32; ++i) {
        BitString alpha = BitString::from_index(5, i);
        bool agree = true;
        for (std::size_t j = 0; j < 3; ++j)
            if (alpha.bit(j) != w.bit(j)) agree = false;
        CHECK(consistent(id, alpha, w) == agree);
    }
}

TEST_CASE("pair-swap consistency constrains the second answer") {
    ScanningFunction swap = permutation_to_scanner(Permutation::pair_swap());
    BitString w = BitString::parse("1");
    for (std::uint64_t i = 0; i < 4; ++i) {
        BitString alpha = BitString::from_index(2, i);
        CHECK(consistent(swap, alpha, w) == (alpha.bit(1) == 1));
    }
}

TEST_CASE("the identity scanner fills with g(n) = n") {
    ScanningFunction id = permutation_to_scanner(Permutation::identity());
    for (std::uint64_t n = 0; n <= 6; ++n) CHECK(filling_check(id, poly({0, 1}), n).ok);
}

TEST_CASE("pair-swap misses position 0 at g(n) = n") {
    ScanningFunction swap = permutation_to_scanner(Permutation::pair_swap());
    FillingReport r = filling_check(swap, poly({0, 1}), 1);
    CHECK(!r.ok);
    CHECK(r.witness_run->str() == "0");  // lexicographically least failing run
    CHECK(*r.missed_position == 0);
}

TEST_CASE("pair-swap fills with g(n) = n + 1") {
    ScanningFunction swap = permutation_to_scanner(Permutation::pair_swap());
    for (std::uint64_t n = 0; n <= 6; ++n) CHECK(filling_check(swap, poly({1, 1}), n).ok);
}

TEST_CASE("filling_check refuses to silently truncate") {
    ScanningFunction id = permutation_to_scanner(Permutation::identity());
    CHECK_THROWS_AS(filling_check_at(id, 30, 4, Budget{1 << 10}), BudgetError);
}

TEST_CASE("filling bounds match the inverse formula and the examples") {
    CHECK(filling_bound(Permutation::identity(), 5) == 5);
    Permutation swap = Permutation::pair_swap();
    CHECK(filling_bound(swap, 1) == 2);
    CHECK(filling_bound(swap, 2) == 2);
    CHECK(filling_bound(swap, 3) == 4);
    CHECK(filling_bound(rearrangement_permutation(poly({2, 1})), 1) == 1);
    CHECK(filling_bound(Permutation::identity(), 0) == 0);
}

TEST_CASE("filling bounds are exact: pass at the bound, fail below") {
    for (Permutation s : {Permutation::identity(), Permutation::pair_swap(),
                          rearrangement_permutation(poly({2, 1}))}) {
        for (std::uint64_t n = 1; n <= 6; ++n) {
            std::uint64_t bound = filling_bound(s, n);
            ScanningFunction v = permutation_to_scanner(s);
            CHECK(filling_check_at(v, bound, n).ok);
            FillingReport below = filling_check_at(v, bound - 1, n);
            CHECK(!below.ok);
            CHECK(below.witness_run);
        }
    }
}

TEST_CASE("runs past the filling bound pin down every short query") {
    // alpha ~V w iff alpha|g(|w|) ~V w once the scanner is g-filling.
    for (const NamedScanner& s : builtin_scanners()) {
        CAPTURE(s.name);
        for (std::size_t wlen = 0; wlen <= 3; ++wlen) {
            std::uint64_t gw = s.g.eval_u64(wlen);
            std::uint64_t max_len = s.g.eval_u64(3) + 2;
            for (std::uint64_t wi = 0; wi < (std::uint64_t{1} << wlen); ++wi) {
                BitString w = BitString::from_index(wlen, wi);
                for (std::uint64_t len = gw; len <= max_len; ++len) {
                    for (std::uint64_t ai = 0; ai < (std::uint64_t{1} << len); ++ai) {
                        BitString alpha = BitString::from_index(static_cast<std::size_t>(len), ai);
                        CHECK(consistent(s.v, alpha, w) ==
                              consistent(s.v, alpha.prefix(static_cast<std::size_t>(gw)), w));
                    }
                }
            }
        }
    }
}
