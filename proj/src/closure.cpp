#include "martlab/closure.hpp"

#include <utility>

namespace martlab {

BettingStrategy BettingStrategy::make(ScanningFunction v, Martingale b, PolynomialNat g,
                                      std::uint64_t certify_to, const Budget& budget) {
    std::uint64_t deepest = 0;
    for (std::uint64_t n = 0; n <= certify_to; ++n) {
        std::uint64_t gn = g.eval_u64(n);
        if (gn < n)
            throw PreconditionError("filling polynomial must satisfy g(n) >= n; fails at n = " +
                                    std::to_string(n));
        deepest = std::max(deepest, gn);
    }
    BitString witness;
    if (!check_non_repetition(v, static_cast<std::size_t>(deepest + 1), &witness))
        throw PreconditionError("scanner repeats a query on run \"" + witness.str() + "\"");
    for (std::uint64_t n = 0; n <= certify_to; ++n) {
        FillingReport r = filling_check(v, g, n, budget);
        if (!r.ok)
            throw PreconditionError("scanner is not g-filling at n = " + std::to_string(n) +
                                    ": run \"" + r.witness_run->str() + "\" misses position " +
                                    std::to_string(*r.missed_position));
    }
    return BettingStrategy(std::move(v), std::move(b), std::move(g), certify_to);
}

namespace {

// Depth-first enumeration of consistent runs: steps whose query lands
// below |w| are forced to w's answer, so exactly the runs consistent
// with w are visited.
void sum_consistent(const BettingStrategy& g, const BitString& w, std::uint64_t t, BitString& run,
                    Rational& sum, std::uint64_t& count) {
    if (run.size() == t) {
        sum += g.martingale().value(run);
        ++count;
        return;
    }
    std::uint64_t q = g.scanner().query(run);
    if (q < w.size()) {
        run.push_back(w.bit(static_cast<std::size_t>(q)));
        sum_consistent(g, w, t, run, sum, count);
    } else {
        run.push_back(0);
        sum_consistent(g, w, t, run, sum, count);
        run.pop_back();
        run.push_back(1);
        sum_consistent(g, w, t, run, sum, count);
    }
    run.pop_back();
}

}  // namespace

AvgReport averaging_value(const BettingStrategy& g, const BitString& w, std::uint64_t t,
                          const Budget& budget) {
    const std::uint64_t g_w = g.g_at(w.size());
    if (t < g_w)
        throw PreconditionError("averaging_value: t = " + std::to_string(t) +
                                " is below the filling bound g(|w|) = " + std::to_string(g_w));
    if (t >= 63) throw BudgetError("averaging_value: t too large to enumerate");
    budget.require_runs(std::uint64_t{1} << t, "averaging_value");

    AvgReport report;
    report.w = w;
    report.t = t;
    report.runs_enumerated = std::uint64_t{1} << t;
    Rational sum(0);
    BitString run;
    sum_consistent(g, w, t, run, sum, report.consistent_count);
    report.value = pow2(static_cast<long long>(w.size()) - static_cast<long long>(t)) * sum;
    return report;
}

Rational averaging(const BettingStrategy& g, const BitString& w, const Budget& budget) {
    return averaging_value(g, w, g.g_at(w.size()), budget).value;
}

bool t_independence_check(const BettingStrategy& g, const BitString& w, std::uint64_t t1,
                          std::uint64_t t2, const Budget& budget) {
    if (t1 >= t2) throw PreconditionError("t_independence_check requires t1 < t2");
    return averaging_value(g, w, t1, budget).value == averaging_value(g, w, t2, budget).value;
}

FairnessReport fairness_lemma_check(const BettingStrategy& g, std::size_t depth,
                                    const Budget& budget) {
    FairnessReport report;
    report.depth = depth;
    for (std::size_t len = 0; len < depth; ++len) {
        for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << len); ++idx) {
            BitString w = BitString::from_index(len, idx);
            Rational dw = averaging(g, w, budget);
            Rational d0 = averaging(g, w.append(0), budget);
            Rational d1 = averaging(g, w.append(1), budget);
            if (d0 + d1 != 2 * dw) {
                report.status = FairnessReport::Status::unfair;
                report.witness = w;
                return report;
            }
        }
    }
    return report;
}

namespace {

// Least B value over all extensions of `node` up to the given depth,
// early-exiting once a value below c is seen. Counts leaf work against
// the budget.
bool subtree_at_least(const Martingale& b, const BitString& node, std::uint64_t depth,
                      const Rational& c, std::uint64_t& visited, const Budget& budget) {
    if (++visited > budget.max_runs)
        throw BudgetError("success_transfer_demo: extension scan exceeds budget");
    if (b.value(node) < c) return false;
    if (node.size() >= depth) return true;
    return subtree_at_least(b, node.append(0), depth, c, visited, budget) &&
           subtree_at_least(b, node.append(1), depth, c, visited, budget);
}

}  // namespace

SuccessReport success_transfer_demo(const BettingStrategy& g, const SequenceOracle& z,
                                    const Rational& c, std::uint64_t budget_depth,
                                    const Budget& budget) {
    SuccessReport report;
    report.threshold = c;

    BitString run;  // prefix of Z.V
    std::uint64_t max_query_seen = 0;
    std::uint64_t visited = 0;
    for (std::uint64_t len = 0; len <= budget_depth; ++len) {
        const std::uint64_t r = len == 0 ? 0 : max_query_seen + 1;
        const std::uint64_t depth = std::max(budget_depth, g.g_at(r));
        // A candidate must keep B at or above c on every extension up to
        // `depth`; B(run) < c already refutes it (run extends itself).
        if (g.martingale().value(run) >= c &&
            subtree_at_least(g.martingale(), run, depth, c, visited, budget)) {
            report.found = true;
            report.run_length = static_cast<std::size_t>(len);
            report.prefix_length = r;
            report.depth_checked = depth;
            report.value = averaging_value(g, z.prefix(static_cast<std::size_t>(r)), g.g_at(r),
                                           budget)
                               .value;
            return report;
        }
        if (len == budget_depth) break;
        std::uint64_t q = g.scanner().query(run);
        max_query_seen = len == 0 ? q : std::max(max_query_seen, q);
        run.push_back(z.bit(q));
    }
    report.depth_checked = budget_depth;
    return report;
}

Rational AveragingNode::value(const BitString& w) const {
    return averaging(strategy_, w, budget_);
}

Martingale averaging_martingale(BettingStrategy g, const Budget& budget) {
    return Martingale(std::make_shared<AveragingNode>(std::move(g), budget));
}

}  // namespace martlab
