#include "martlab/scanner.hpp"

#include <algorithm>
#include <utility>

namespace martlab {

namespace {

class ProgrammaticScanRule final : public ScanRule {
  public:
    ProgrammaticScanRule(std::function<std::uint64_t(const BitString&)> fn,
                         std::function<std::uint64_t(std::size_t)> budget_fn, std::string name)
        : fn_(std::move(fn)), budget_fn_(std::move(budget_fn)), name_(std::move(name)) {}
    std::uint64_t query(const BitString& run) const override { return fn_(run); }
    std::uint64_t max_query(std::size_t run_len) const override { return budget_fn_(run_len); }
    std::string kind() const override { return name_; }

  private:
    std::function<std::uint64_t(const BitString&)> fn_;
    std::function<std::uint64_t(std::size_t)> budget_fn_;
    std::string name_;
};

}  // namespace

TableScanRule::TableScanRule(std::size_t depth, std::map<std::string, std::uint64_t> entries)
    : depth_(depth), entries_(std::move(entries)) {
    // Every run below the depth must be present, and no run may repeat
    // one of its own earlier queries.
    for (std::uint64_t len = 0; len < depth_; ++len) {
        for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << len); ++idx) {
            BitString run = BitString::from_index(len, idx);
            auto it = entries_.find(run.str());
            if (it == entries_.end())
                throw ParseError("scanner table: missing entry for run \"" + run.str() + "\"");
            for (std::size_t i = 0; i < run.size(); ++i) {
                if (entries_.at(run.prefix(i).str()) == it->second)
                    throw PreconditionError("scanner table repeats query " +
                                            std::to_string(it->second) + " on run \"" +
                                            run.str() + "\"");
            }
        }
    }
}

std::uint64_t TableScanRule::query(const BitString& run) const {
    auto it = entries_.find(run.str());
    if (it == entries_.end())
        throw EvalError("scanner table of depth " + std::to_string(depth_) +
                        " queried at run length " + std::to_string(run.size()));
    return it->second;
}

std::uint64_t TableScanRule::max_query(std::size_t run_len) const {
    std::uint64_t m = 0;
    for (const auto& [run, v] : entries_)
        if (run.size() < run_len) m = std::max(m, v);
    return m;
}

ScanningFunction ScanningFunction::from_table(std::size_t depth,
                                              std::map<std::string, std::uint64_t> entries) {
    return ScanningFunction(std::make_shared<TableScanRule>(depth, std::move(entries)));
}

ScanningFunction ScanningFunction::programmatic(
    std::function<std::uint64_t(const BitString&)> fn,
    std::function<std::uint64_t(std::size_t)> budget_fn, std::string name) {
    return ScanningFunction(std::make_shared<ProgrammaticScanRule>(
        std::move(fn), std::move(budget_fn), std::move(name)));
}

ScanningFunction permutation_to_scanner(const Permutation& s) {
    return ScanningFunction(std::make_shared<PermutationScanRule>(s));
}

BitString compose_with_scanner(const SequenceOracle& z, const ScanningFunction& v,
                               std::size_t n) {
    BitString y;
    for (std::size_t i = 0; i < n; ++i) y.push_back(z.bit(v.query(y)));
    return y;
}

bool consistent(const ScanningFunction& v, const BitString& alpha, const BitString& w) {
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        std::uint64_t x = v.query(alpha.prefix(j));
        if (x < w.size() && w.bit(static_cast<std::size_t>(x)) != alpha.bit(j)) return false;
    }
    return true;
}

FillingReport filling_check_at(const ScanningFunction& v, std::uint64_t run_length,
                               std::uint64_t n, const Budget& budget) {
    FillingReport report;
    report.n = n;
    report.run_length = run_length;
    if (run_length >= 63) throw BudgetError("filling_check: run length too large to enumerate");
    const std::uint64_t runs = std::uint64_t{1} << run_length;
    budget.require_runs(runs, "filling_check");
    report.runs_enumerated = runs;
    // Ascending index = lexicographic run order, so the first failure is
    // the lexicographically least witness.
    for (std::uint64_t idx = 0; idx < runs; ++idx) {
        BitString run = BitString::from_index(static_cast<std::size_t>(run_length), idx);
        std::vector<bool> seen(static_cast<std::size_t>(n), false);
        for (std::size_t i = 0; i < run.size(); ++i) {
            std::uint64_t q = v.query(run.prefix(i));
            if (q < n) seen[static_cast<std::size_t>(q)] = true;
        }
        for (std::uint64_t r = 0; r < n; ++r) {
            if (!seen[static_cast<std::size_t>(r)]) {
                report.ok = false;
                report.witness_run = run;
                report.missed_position = r;
                return report;
            }
        }
    }
    return report;
}

FillingReport filling_check(const ScanningFunction& v, const PolynomialNat& g, std::uint64_t n,
                            const Budget& budget) {
    return filling_check_at(v, g.eval_u64(n), n, budget);
}

std::uint64_t filling_bound(const Permutation& s, std::uint64_t n) {
    std::uint64_t bound = 0;
    for (std::uint64_t r = 0; r < n; ++r) bound = std::max(bound, s.inverse(r) + 1);
    return bound;
}

bool check_non_repetition(const ScanningFunction& v, std::size_t depth, BitString* witness) {
    if (depth >= 63) throw BudgetError("check_non_repetition: depth too large to enumerate");
    for (std::size_t len = 1; len < depth; ++len) {
        for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << len); ++idx) {
            BitString run = BitString::from_index(len, idx);
            std::uint64_t q = v.query(run);
            for (std::size_t i = 0; i < run.size(); ++i) {
                if (v.query(run.prefix(i)) == q) {
                    if (witness) *witness = run;
                    return false;
                }
            }
        }
    }
    return true;
}

}  // namespace martlab
