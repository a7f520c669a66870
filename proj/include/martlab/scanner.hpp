#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "martlab/bitstring.hpp"
#include "martlab/errors.hpp"
#include "martlab/permutation.hpp"
#include "martlab/polynomial.hpp"
#include "martlab/sequence.hpp"

namespace martlab {

// Adaptive query rule: maps the answer history (a "run") to the next
// position to read. Never repeats a query within a run.
class ScanRule {
  public:
    virtual ~ScanRule() = default;
    virtual std::uint64_t query(const BitString& run) const = 0;
    // Declared bound on positions reachable within runs of the given
    // length; keeps brute-force enumeration total.
    virtual std::uint64_t max_query(std::size_t run_len) const = 0;
    virtual std::string kind() const = 0;
};

class ScanningFunction {
  public:
    explicit ScanningFunction(std::shared_ptr<const ScanRule> rule) : rule_(std::move(rule)) {}

    std::uint64_t query(const BitString& run) const { return rule_->query(run); }
    std::uint64_t max_query(std::size_t run_len) const { return rule_->max_query(run_len); }
    const ScanRule& rule() const { return *rule_; }

    static ScanningFunction from_table(std::size_t depth,
                                       std::map<std::string, std::uint64_t> entries);
    static ScanningFunction programmatic(std::function<std::uint64_t(const BitString&)> fn,
                                         std::function<std::uint64_t(std::size_t)> budget_fn,
                                         std::string name);

  private:
    std::shared_ptr<const ScanRule> rule_;
};

// V_S(run) = S(|run|); injectivity of S gives non-repetition for free.
ScanningFunction permutation_to_scanner(const Permutation& s);

// The fixed point Y with Y(i) = Z(V(Y|i)), first n bits.
BitString compose_with_scanner(const SequenceOracle& z, const ScanningFunction& v, std::size_t n);

// alpha ~V w: every query of the run that lands below |w| is answered
// the way w says.
bool consistent(const ScanningFunction& v, const BitString& alpha, const BitString& w);

struct FillingReport {
    bool ok = true;
    std::uint64_t n = 0;
    std::uint64_t run_length = 0;
    std::uint64_t runs_enumerated = 0;
    std::optional<BitString> witness_run;
    std::optional<std::uint64_t> missed_position;
};

// Exhaustively checks that every run of the given length queries every
// position below n. Witness is the lexicographically least failing run.
FillingReport filling_check_at(const ScanningFunction& v, std::uint64_t run_length,
                               std::uint64_t n, const Budget& budget = {});

FillingReport filling_check(const ScanningFunction& v, const PolynomialNat& g, std::uint64_t n,
                            const Budget& budget = {});

// Least run length after which the scanner of S has queried all
// positions below n: 0 for n = 0, else 1 + max inverse below n.
std::uint64_t filling_bound(const Permutation& s, std::uint64_t n);

// True when no run of length < depth repeats a query; fills *witness
// with the offending run if given.
bool check_non_repetition(const ScanningFunction& v, std::size_t depth,
                          BitString* witness = nullptr);

class PermutationScanRule final : public ScanRule {
  public:
    explicit PermutationScanRule(Permutation s) : perm_(std::move(s)) {}
    std::uint64_t query(const BitString& run) const override {
        return perm_.forward(run.size());
    }
    std::uint64_t max_query(std::size_t run_len) const override {
        std::uint64_t m = 0;
        for (std::size_t i = 0; i < run_len; ++i) m = std::max(m, perm_.forward(i));
        return m;
    }
    std::string kind() const override { return "from_permutation"; }
    const Permutation& permutation() const { return perm_; }

  private:
    Permutation perm_;
};

class TableScanRule final : public ScanRule {
  public:
    TableScanRule(std::size_t depth, std::map<std::string, std::uint64_t> entries);
    std::uint64_t query(const BitString& run) const override;
    std::uint64_t max_query(std::size_t run_len) const override;
    std::string kind() const override { return "table"; }
    std::size_t depth() const { return depth_; }
    const std::map<std::string, std::uint64_t>& entries() const { return entries_; }

  private:
    std::size_t depth_;
    std::map<std::string, std::uint64_t> entries_;
};

}  // namespace martlab
