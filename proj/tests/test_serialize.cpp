#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "martlab/serialize.hpp"
#include "support/gen.hpp"

using namespace martlab;

namespace {

PolynomialNat poly(std::vector<std::uint64_t> coeffs) { return PolynomialNat(std::move(coeffs)); }

void check_equivalent(const Martingale& a, const Martingale& b, std::size_t depth) {
    for (std::size_t len = 0; len <= depth; ++len)
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i) {
            BitString x = BitString::from_index(len, i);
            CHECK(a.value(x) == b.value(x));
        }
}

}  // namespace

TEST_CASE("martingale descriptors round-trip through their documents") {
    testgen::Gen gen(71);
    for (int i = 0; i < 25; ++i) {
        Martingale m = gen.tree(5, 2);
        json doc = martingale_to_json(m);
        Martingale back = martingale_from_json(doc);
        check_equivalent(m, back, 5);
        CHECK(martingale_to_json(back) == doc);  // canonical re-emission
    }
}

TEST_CASE("descriptor documents are byte-stable") {
    Martingale m = weighted_sum(
        {Martingale::favor_bit(0, rat(3, 2)), savings_transform(Martingale::constant(rat(2)))});
    CHECK(martingale_to_json(m).dump(2) == martingale_to_json(m).dump(2));
    json parsed = parse_document(martingale_to_json(m).dump(2));
    CHECK(parsed == martingale_to_json(m));
}

TEST_CASE("sequence descriptors round-trip") {
    std::vector<SequenceOracle> suite{
        SequenceOracle::from_prefix(BitString::parse("0110"), 1),
        SequenceOracle::pseudorandom(99),
        interleaved_oracle(PrefixFunction::parity(), SequenceOracle::pseudorandom(4)),
        leftmost_path_oracle(Martingale::favor_bit(0, rat(3, 2))),
    };
    for (const SequenceOracle& z : suite) {
        SequenceOracle back = sequence_from_json(sequence_to_json(z));
        CHECK(back.prefix(40) == z.prefix(40));
    }
    CHECK_THROWS_AS(sequence_to_json(SequenceOracle::from_fn([](std::uint64_t) { return 0; }, "fn")),
                    EvalError);
}

TEST_CASE("prefix function descriptors round-trip") {
    for (const PrefixFunction& f : {PrefixFunction::constant(1), PrefixFunction::parity(),
                                    PrefixFunction::pseudorandom(17)}) {
        PrefixFunction back = prefix_function_from_json(prefix_function_to_json(f));
        for (std::uint64_t i = 0; i < 32; ++i) {
            BitString x = BitString::from_index(5, i);
            CHECK(back.bit(x) == f.bit(x));
        }
    }
}

TEST_CASE("permutation descriptors round-trip, tables as pair lists") {
    std::vector<Permutation> suite{Permutation::identity(), Permutation::pair_swap(),
                                   Permutation::table({{0, 2}, {2, 0}}),
                                   rearrangement_permutation(poly({2, 1})),
                                   dishonest_permutation()};
    for (const Permutation& s : suite) {
        json doc = permutation_to_json(s);
        Permutation back = permutation_from_json(doc);
        for (std::uint64_t n = 0; n < 64; ++n) CHECK(back.forward(n) == s.forward(n));
    }
    json table = permutation_to_json(Permutation::table({{0, 2}, {2, 0}}));
    CHECK(table["pairs"].is_array());
    CHECK(table["pairs"][0].is_array());
}

TEST_CASE("scanner descriptors round-trip") {
    ScanningFunction v = permutation_to_scanner(Permutation::pair_swap());
    ScanningFunction back = scanner_from_json(scanner_to_json(v));
    for (std::uint64_t i = 0; i < 16; ++i) {
        BitString run = BitString::from_index(4, i);
        CHECK(back.query(run) == v.query(run));
    }

    ScanningFunction table =
        ScanningFunction::from_table(2, {{"", 1}, {"0", 0}, {"1", 2}});
    ScanningFunction table_back = scanner_from_json(scanner_to_json(table));
    CHECK(table_back.query(BitString::parse("1")) == 2);

    ScanningFunction prog = ScanningFunction::programmatic(
        [](const BitString& r) { return r.size(); }, [](std::size_t t) { return t; }, "prog");
    CHECK_THROWS_AS(scanner_to_json(prog), EvalError);
}

TEST_CASE("synthetic evaluator descriptors round-trip") {
    SyntheticBPP alg(poly({6, 4}), PrefixFunction::parity(), 21, KeyMode::shared, 3);
    SyntheticBPP back = synthetic_from_json(synthetic_to_json(alg));
    CHECK(back.seed() == 21);
    CHECK(back.key_mode() == KeyMode::shared);
    CHECK(back.bad_count_override() == 3);
    BitString x = BitString::parse("101");
    for (std::uint64_t yi = 0; yi < 32; ++yi) {
        BitString y = BitString::from_index(10, yi * 31 % 1024);
        CHECK(back.evaluate(x, y) == alg.evaluate(x, y));
    }
}

TEST_CASE("averaging, bin, and predictor nodes round-trip as martingales") {
    Martingale b = Martingale::stake_table_from_fn(5, [](const BitString& x) {
        if (x.empty()) return rat(1);
        return x.bit(0) == 1 ? rat(3, 2) : rat(1, 2);
    });
    BettingStrategy strategy = BettingStrategy::make(
        permutation_to_scanner(Permutation::pair_swap()), b, poly({1, 1}), 4);
    Martingale avg = averaging_martingale(strategy);
    check_equivalent(avg, martingale_from_json(martingale_to_json(avg)), 3);

    SyntheticBPP alg = SyntheticBPP::standard(7);
    Martingale bins = bin_martingale(alg);
    check_equivalent(bins, martingale_from_json(martingale_to_json(bins)), 4);

    Martingale h = predictor_martingale(alg);
    check_equivalent(h, martingale_from_json(martingale_to_json(h)), 7);
}

TEST_CASE("strategy documents validate while parsing") {
    json good{{"scanner", scanner_to_json(permutation_to_scanner(Permutation::pair_swap()))},
              {"martingale", martingale_to_json(Martingale::constant(rat(1)))},
              {"filling", polynomial_to_json(poly({1, 1}))},
              {"certify_to", 4}};
    BettingStrategy g = strategy_from_json(good);
    CHECK(g.certified_to() == 4);
    CHECK(strategy_to_json(g) == good);

    json bad = good;
    bad["filling"] = polynomial_to_json(poly({0, 1}));  // not filling for pair-swap
    CHECK_THROWS_AS(strategy_from_json(bad), PreconditionError);
}

TEST_CASE("malformed documents raise parse errors") {
    CHECK_THROWS_AS(parse_document("{not json"), ParseError);
    CHECK_THROWS_AS(martingale_from_json(parse_document("{\"kind\":\"wat\"}")), ParseError);
    CHECK_THROWS_AS(martingale_from_json(parse_document("{\"value\":\"1/1\"}")), ParseError);
    CHECK_THROWS_AS(martingale_from_json(parse_document(
                        "{\"kind\":\"constant\",\"value\":\"1/0\"}")),
                    ParseError);
    CHECK_THROWS_AS(
        martingale_from_json(parse_document(
            "{\"kind\":\"stake_table\",\"depth\":1,\"values\":{\"\":\"1/1\",\"0\":\"1/1\"}}")),
        ParseError);
    CHECK_THROWS_AS(
        martingale_from_json(parse_document("{\"kind\":\"favor_bit\",\"bit\":0,\"factor\":\"2/1\"}")),
        ParseError);
    CHECK_THROWS_AS(permutation_from_json(parse_document("{\"kind\":\"table\",\"pairs\":[[0,5]]}")),
                    ParseError);
    CHECK_THROWS_AS(polynomial_from_json(parse_document("{\"coeffs\":[3]}")), ParseError);
}

TEST_CASE("reports serialize with exact rational fields") {
    FairnessReport fr = fairness_check(Martingale::stake_table(1, {rat(2), rat(1), rat(1)}), 1);
    json fj = fairness_report_to_json(fr);
    CHECK(fj["ok"] == false);
    CHECK(fj["status"] == "unfair");
    CHECK(fj["witness"] == "");

    FillingReport fill =
        filling_check(permutation_to_scanner(Permutation::pair_swap()), poly({0, 1}), 1);
    json fillj = filling_report_to_json(fill);
    CHECK(fillj["ok"] == false);
    CHECK(fillj["witness_run"] == "0");
    CHECK(fillj["missed_position"] == 0);

    MeasureReport mr = bad_block_measure(SyntheticBPP::standard(7), 0);
    json mj = measure_report_to_json(mr);
    CHECK(mj["bound"] == "1/2");
    CHECK(mj["within_bound"] == true);
}
