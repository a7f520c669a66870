// Acceptance suite: every release gate in one binary, one line per
// criterion. All comparisons are exact rational equality; runtime caps
// are enforced where the gate states one.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "martlab/closure.hpp"
#include "martlab/constructions.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace martlab;
using testgen::Gen;

namespace {

PolynomialNat poly(std::vector<std::uint64_t> coeffs) { return PolynomialNat(std::move(coeffs)); }

struct Failure {
    std::string detail;
};

void require(bool ok, const std::string& detail) {
    if (!ok) throw Failure{detail};
}

// A composition with at least one combinator over fair leaves.
Martingale composed(Gen& gen, std::size_t eval_depth) {
    switch (gen.u(3)) {
        case 0: return delayed(gen.tree(eval_depth, 1), gen.u(4));
        case 1: {
            std::vector<Martingale> children;
            std::size_t count = 2 + gen.u(2);
            for (std::size_t i = 0; i < count; ++i) children.push_back(gen.tree(eval_depth, 1));
            return weighted_sum(std::move(children));
        }
        default: return savings_transform(gen.tree(eval_depth, 1));
    }
}

struct NamedScanner {
    const char* name;
    Permutation perm;
    PolynomialNat g;
};

std::vector<NamedScanner> scanner_suite() {
    return {{"identity", Permutation::identity(), poly({0, 1})},
            {"pair_swap", Permutation::pair_swap(), poly({1, 1})},
            {"block_rearrangement", rearrangement_permutation(poly({2, 1})), poly({0, 2})}};
}

// --- criterion 1: fairness suite ---

void criterion_fairness_suite() {
    Gen gen(2024);
    for (int i = 0; i < 200; ++i) {
        Martingale m = composed(gen, 6);
        FairnessReport r = fairness_check(m, 6);
        require(r.ok(), "descriptor " + std::to_string(i) + " failed fairness: " +
                            r.status_name() +
                            (r.witness ? " at \"" + r.witness->str() + "\"" : ""));
    }
}

// --- criterion 2: averaging martingale against every built-in scanner ---

void criterion_averaging() {
    const Budget budget{std::uint64_t{1} << 16};
    Gen gen(77);
    for (const NamedScanner& s : scanner_suite()) {
        for (int i = 0; i < 50; ++i) {
            Martingale b = gen.tree(10, 1);
            BettingStrategy g = BettingStrategy::make(permutation_to_scanner(s.perm), b, s.g, 5,
                                                      budget);
            FairnessReport lemma = fairness_lemma_check(g, 4, budget);
            require(lemma.ok(), std::string(s.name) + ": fairness lemma failed at \"" +
                                    (lemma.witness ? lemma.witness->str() : "?") + "\"");
            for (std::size_t len = 0; len <= 3; ++len) {
                for (std::uint64_t wi = 0; wi < (std::uint64_t{1} << len); ++wi) {
                    BitString w = BitString::from_index(len, wi);
                    std::uint64_t t1 = g.g_at(len);
                    require(t_independence_check(g, w, t1, t1 + 2, budget),
                            std::string(s.name) + ": t-dependence at w=\"" + w.str() + "\"");
                }
            }
            for (std::size_t len = 0; len <= 4; ++len) {
                for (std::uint64_t wi = 0; wi < (std::uint64_t{1} << len); ++wi) {
                    BitString w = BitString::from_index(len, wi);
                    std::uint64_t t = g.g_at(len);
                    AvgReport mine = averaging_value(g, w, t, budget);
                    auto brute = testoracle::brute_force_average(g.scanner(), b, w, t);
                    require(mine.value == brute.weighted && mine.value == brute.mean &&
                                mine.consistent_count == brute.consistent,
                            std::string(s.name) + ": oracle mismatch at w=\"" + w.str() + "\"");
                }
            }
        }
    }
}

// --- criterion 3: identity collapse ---

void criterion_identity_collapse() {
    Gen gen(303);
    for (int i = 0; i < 50; ++i) {
        Martingale b = gen.tree(6, 1);
        BettingStrategy g =
            BettingStrategy::make(permutation_to_scanner(Permutation::identity()), b, poly({0, 1}), 6);
        for (std::size_t len = 0; len <= 6; ++len) {
            for (std::uint64_t wi = 0; wi < (std::uint64_t{1} << len); ++wi) {
                BitString w = BitString::from_index(len, wi);
                require(averaging(g, w) == b.value(w),
                        "identity collapse failed at w=\"" + w.str() + "\"");
            }
        }
    }
}

// --- criterion 4: savings bound ---

void criterion_savings_bound() {
    Gen gen(404);
    for (int i = 0; i < 100; ++i) {
        Martingale base = gen.tree(8, 1);
        Martingale hat = savings_transform(base);
        // Walk every string up to length 8 carrying the prefix maximum
        // and the previous savings balance.
        struct Frame {
            BitString x;
            Rational max_seen;
            Rational s;
        };
        std::vector<Frame> layer{{BitString(), hat.value(BitString()), Rational(0)}};
        for (std::size_t len = 0; len < 8; ++len) {
            std::vector<Frame> next;
            next.reserve(layer.size() * 2);
            for (const Frame& f : layer) {
                for (int b = 0; b < 2; ++b) {
                    BitString x = f.x.append(b);
                    Rational v = hat.value(x);
                    require(v >= f.max_seen - 2, "drop below max-2 at \"" + x.str() + "\"");
                    Rational s = savings_accounts(base, x).first;
                    require(s >= f.s, "savings account shrank at \"" + x.str() + "\"");
                    next.push_back({std::move(x), std::max(f.max_seen, v), std::move(s)});
                }
            }
            layer = std::move(next);
        }
    }
}

// --- criterion 5: leftmost path ---

void criterion_leftmost_path() {
    Gen gen(505);
    std::vector<Martingale> suite{
        weighted_sum({Martingale::favor_bit(0, rat(3, 2)),
                      delayed(Martingale::favor_bit(1, rat(3, 2)), 2)}),
        savings_transform(Martingale::favor_bit(0, rat(3, 2))),
        Martingale::constant(rat(1)),
    };
    for (int i = 0; i < 12; ++i) suite.push_back(gen.tree(12, 1));
    for (std::size_t i = 0; i < suite.size(); ++i) {
        const Martingale& l = suite[i];
        BitString z = leftmost_path(l, 12);
        Rational prev = l.value(BitString());
        for (std::size_t m = 1; m <= 12; ++m) {
            Rational cur = l.value(z.prefix(m));
            require(cur <= prev, "trace ascends at step " + std::to_string(m) + " of martingale " +
                                     std::to_string(i));
            prev = std::move(cur);
        }
        auto least = testoracle::lex_least_nonascending(l, 12);
        require(least.has_value() && z == *least,
                "path is not lexicographically least for martingale " + std::to_string(i));
    }
}

// --- criterion 6: block pipeline ---

void criterion_pipeline() {
    SyntheticBPP alg = SyntheticBPP::standard(7);
    for (std::uint64_t n : {std::uint64_t{0}, std::uint64_t{1}}) {
        MeasureReport r = bad_block_measure(alg, n);
        require(r.within_bound, "bad-block measure exceeds 2^-(2n+1) at n=" + std::to_string(n));
        const auto& bad = alg.bad_union(n, Budget{});
        Rational gain = pow2(-static_cast<long long>(n) - 1) *
                        pow2(static_cast<long long>(alg.p_at(n))) / Int(bad.size());
        require(gain >= 1, "bin gain below 1 at n=" + std::to_string(n));
    }
    require(fairness_check(bin_martingale(alg), 7).ok(), "bin martingale is unfair");
    for (std::uint64_t yi : alg.bad_union(0, Budget{}))
        require(bin_breakdown(alg, BitString::from_index(6, yi))[0] >= 1,
                "bad path " + std::to_string(yi) + " does not lift bin 0 to 1");
    for (std::uint64_t yi : alg.bad_union(1, Budget{})) {
        BitString w = BitString::repeated(6, 0);
        BitString y1 = BitString::from_index(10, yi);
        for (std::size_t i = 0; i < y1.size(); ++i) w.push_back(y1.bit(i));
        require(bin_breakdown(alg, w)[1] >= 1,
                "bad path " + std::to_string(yi) + " does not lift bin 1 to 1");
    }

    // Predictor capital after each block is exactly the factor product
    // (3/2)^c (1/2)^(k-c), with c recomputed from the evaluator.
    SequenceOracle base = SequenceOracle::pseudorandom(13);
    auto blocks = pipeline_run(alg, base, 2);
    SequenceOracle z = interleaved_oracle(alg.target(), base);
    SequenceOracle zhat = permuted_oracle(z, rearrangement_permutation(alg.p()));
    Martingale h = predictor_martingale(alg);
    Rational expected(1);
    for (const BlockReport& b : blocks) {
        BitString x = z.prefix(static_cast<std::size_t>(2 * b.n + 1));
        bool correct = alg.evaluate(x, b.y) == z.bit(2 * b.n + 1);
        require(correct == b.prediction_correct, "block report disagrees with the evaluator");
        expected *= correct ? rat(3, 2) : rat(1, 2);
        Rational at_block_end =
            h.value(zhat.prefix(static_cast<std::size_t>(alg.layout().a_slot(b.n) + 1)));
        require(at_block_end == expected,
                "predictor capital off at block " + std::to_string(b.n));
    }
    require(fairness_check(h, 8).ok(), "predictor martingale is unfair");
}

// --- criterion 7: permutation plumbing ---

void criterion_plumbing() {
    std::vector<Permutation> perms{rearrangement_permutation(poly({2, 1})),
                                   rearrangement_permutation(poly({6, 4}))};
    for (std::size_t pi = 0; pi < perms.size(); ++pi) {
        for (std::uint64_t n = 0; n < 10000; ++n) {
            require(perms[pi].inverse(perms[pi].forward(n)) == n,
                    "inverse(forward) misses at n=" + std::to_string(n));
            require(perms[pi].forward(perms[pi].inverse(n)) == n,
                    "forward(inverse) misses at n=" + std::to_string(n));
        }
    }
    // Dishonest preimages outgrow 64 bits (the dishonesty itself), so the
    // round-trip runs on the exact integers.
    for (std::uint64_t n = 0; n < 10000; ++n) {
        require(dishonest_inverse(dishonest_forward(Int(n))) == n,
                "dishonest inverse(forward) misses at n=" + std::to_string(n));
        require(dishonest_forward(dishonest_inverse(Int(n))) == n,
                "dishonest forward(inverse) misses at n=" + std::to_string(n));
    }

    for (const NamedScanner& s : scanner_suite()) {
        ScanningFunction v = permutation_to_scanner(s.perm);
        for (std::uint64_t n = 1; n <= 64; ++n) {
            std::uint64_t bound = filling_bound(s.perm, n);
            bool covered = true;
            bool tight = false;
            for (std::uint64_t r = 0; r < n; ++r) {
                std::uint64_t inv = s.perm.inverse(r);
                if (inv + 1 > bound) covered = false;
                if (inv + 1 == bound) tight = true;
            }
            require(covered && tight,
                    std::string(s.name) + ": bound not minimal at n=" + std::to_string(n));
            if (n <= 8) {
                require(filling_check_at(v, bound, n).ok,
                        std::string(s.name) + ": bound fails exhaustively at n=" +
                            std::to_string(n));
                FillingReport below = filling_check_at(v, bound - 1, n);
                require(!below.ok && below.witness_run.has_value(),
                        std::string(s.name) + ": bound not witnessed minimal at n=" +
                            std::to_string(n));
            }
        }
    }

    for (std::uint64_t k = 0; k <= 3; ++k) {
        bool found = false;
        for (std::uint64_t n = 0; n < 10000 && !found; ++n) {
            if (cantor_unpair(Int(n)).first != Int(k)) continue;
            if (pk_at_most(Int(k), dishonest_forward(Int(n)), Int(n))) found = true;
        }
        require(found, "no dip witness for row k=" + std::to_string(k));
    }
}

// --- criterion 8: consistency lemma ---

void criterion_consistency_lemma() {
    for (const NamedScanner& s : scanner_suite()) {
        ScanningFunction v = permutation_to_scanner(s.perm);
        std::uint64_t max_len = s.g.eval_u64(3) + 2;
        for (std::size_t wlen = 0; wlen <= 3; ++wlen) {
            std::uint64_t gw = s.g.eval_u64(wlen);
            for (std::uint64_t wi = 0; wi < (std::uint64_t{1} << wlen); ++wi) {
                BitString w = BitString::from_index(wlen, wi);
                for (std::uint64_t len = gw; len <= max_len; ++len) {
                    for (std::uint64_t ai = 0; ai < (std::uint64_t{1} << len); ++ai) {
                        BitString alpha = BitString::from_index(static_cast<std::size_t>(len), ai);
                        bool full = consistent(v, alpha, w);
                        bool cut = consistent(v, alpha.prefix(static_cast<std::size_t>(gw)), w);
                        require(full == cut, std::string(s.name) + ": lemma fails at w=\"" +
                                                 w.str() + "\", run=\"" + alpha.str() + "\"");
                    }
                }
            }
        }
    }
}

struct Criterion {
    int number;
    const char* label;
    double limit_seconds;  // 0 = no stated cap
    std::function<void()> run;
};

}  // namespace

int main() {
    std::vector<Criterion> criteria{
        {1, "fairness suite: 200 random compositions exactly fair to depth 6", 10.0,
         criterion_fairness_suite},
        {2, "averaging martingale: lemma, t-independence, oracle match for 3 scanners x 50 descriptors",
         60.0, criterion_averaging},
        {3, "identity collapse: averaging equals the martingale up to |w| = 6", 0.0,
         criterion_identity_collapse},
        {4, "savings bound: never drops 2 below a prefix, savings account monotone", 0.0,
         criterion_savings_bound},
        {5, "leftmost path: non-ascending trace, lexicographically least at depth 12", 0.0,
         criterion_leftmost_path},
        {6, "block pipeline: measure bound, bin gains, exact predictor capital", 120.0,
         criterion_pipeline},
        {7, "permutation plumbing: 10^4 round-trips, minimal filling bounds, dip witnesses", 0.0,
         criterion_plumbing},
        {8, "consistency lemma: exhaustive up to |w| = 3 over all built-in scanners", 0.0,
         criterion_consistency_lemma},
    };

    int passed = 0;
    for (const Criterion& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        std::string failure;
        try {
            c.run();
        } catch (const Failure& f) {
            failure = f.detail;
        } catch (const std::exception& e) {
            failure = std::string("exception: ") + e.what();
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                             .count();
        if (failure.empty() && c.limit_seconds > 0 && seconds > c.limit_seconds)
            failure = "runtime " + std::to_string(seconds) + "s exceeds " +
                      std::to_string(c.limit_seconds) + "s";
        if (failure.empty()) {
            ++passed;
            std::printf("[PASS] criterion %d: %s (%.2fs)\n", c.number, c.label, seconds);
        } else {
            std::printf("[FAIL] criterion %d: %s (%.2fs) — %s\n", c.number, c.label, seconds,
                        failure.c_str());
        }
    }
    std::printf("acceptance: %d/%zu criteria passed\n", passed, criteria.size());
    return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
