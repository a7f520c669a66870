#pragma once

#include <cstdint>
#include <optional>

#include "martlab/martingale.hpp"
#include "martlab/polynomial.hpp"
#include "martlab/scanner.hpp"

namespace martlab {

// A scanner V paired with a martingale B betting on the scanned bits,
// carrying the filling polynomial g and the range over which the
// certificate was validated.
class BettingStrategy {
  public:
    // Validates, for every n <= certify_to: g(n) >= n, non-repetition of
    // V on runs below length g(n), and that V is g-filling at n.
    static BettingStrategy make(ScanningFunction v, Martingale b, PolynomialNat g,
                                std::uint64_t certify_to, const Budget& budget = {});

    const ScanningFunction& scanner() const { return scanner_; }
    const Martingale& martingale() const { return martingale_; }
    const PolynomialNat& filling() const { return filling_; }
    std::uint64_t certified_to() const { return certified_to_; }

    std::uint64_t g_at(std::uint64_t n) const { return filling_.eval_u64(n); }

  private:
    BettingStrategy(ScanningFunction v, Martingale b, PolynomialNat g, std::uint64_t certified_to)
        : scanner_(std::move(v)),
          martingale_(std::move(b)),
          filling_(std::move(g)),
          certified_to_(certified_to) {}

    ScanningFunction scanner_;
    Martingale martingale_;
    PolynomialNat filling_;
    std::uint64_t certified_to_;
};

struct AvgReport {
    BitString w;
    std::uint64_t t = 0;
    Rational value;
    std::uint64_t runs_enumerated = 0;  // size of the run space, 2^t
    std::uint64_t consistent_count = 0;
};

// 2^(|w|-t) * sum of B(alpha) over runs alpha of length t consistent
// with w; the average of B over consistent runs. Requires t >= g(|w|).
AvgReport averaging_value(const BettingStrategy& g, const BitString& w, std::uint64_t t,
                          const Budget& budget = {});

// Same at the default t = g(|w|).
Rational averaging(const BettingStrategy& g, const BitString& w, const Budget& budget = {});

bool t_independence_check(const BettingStrategy& g, const BitString& w, std::uint64_t t1,
                          std::uint64_t t2, const Budget& budget = {});

// D(w0) + D(w1) = 2 D(w) exactly for every |w| < depth.
FairnessReport fairness_lemma_check(const BettingStrategy& g, std::size_t depth,
                                    const Budget& budget = {});

struct SuccessReport {
    bool found = false;
    std::size_t run_length = 0;      // |alpha|
    std::uint64_t prefix_length = 0; // r = 1 + max query of alpha
    Rational value;                  // D(Z|r)
    Rational threshold;
    std::uint64_t depth_checked = 0;
};

// Plays the strategy against Z: finds the least prefix alpha of Z.V all
// of whose extensions (up to max(budget_depth, g(r))) keep B at or
// above c, then certifies D(Z|r) >= c for r = 1 + max query of alpha.
// Absence within the budget is reported, not refuted.
SuccessReport success_transfer_demo(const BettingStrategy& g, const SequenceOracle& z,
                                    const Rational& c, std::uint64_t budget_depth,
                                    const Budget& budget = {});

// The averaging construction as a composable martingale node; value(w)
// is averaging_value at t = g(|w|).
Martingale averaging_martingale(BettingStrategy g, const Budget& budget = {});

class AveragingNode final : public MartingaleNode {
  public:
    AveragingNode(BettingStrategy strategy, Budget budget)
        : strategy_(std::move(strategy)), budget_(budget) {}
    Rational value(const BitString& w) const override;
    std::string kind() const override { return "averaging"; }
    const BettingStrategy& strategy() const { return strategy_; }

  private:
    BettingStrategy strategy_;
    Budget budget_;
};

}  // namespace martlab
