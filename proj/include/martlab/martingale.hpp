#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "martlab/bitstring.hpp"
#include "martlab/rational.hpp"
#include "martlab/sequence.hpp"

namespace martlab {

// One node of a martingale descriptor tree. Nodes are immutable after
// construction; evaluation is a pure function of the input string.
class MartingaleNode {
  public:
    virtual ~MartingaleNode() = default;
    virtual Rational value(const BitString& x) const = 0;
    virtual std::string kind() const = 0;
};

class Martingale {
  public:
    explicit Martingale(std::shared_ptr<const MartingaleNode> node) : node_(std::move(node)) {}

    Rational value(const BitString& x) const { return node_->value(x); }
    const MartingaleNode& node() const { return *node_; }
    std::shared_ptr<const MartingaleNode> node_ptr() const { return node_; }

    static Martingale constant(Rational c);
    static Martingale favor_bit(int bit, Rational factor, Rational initial = Rational(1));
    // Heap-ordered values, idx(empty)=0, idx(x.b)=2*idx(x)+1+b; size 2^(depth+1)-1.
    static Martingale stake_table(std::size_t depth, std::vector<Rational> values);
    static Martingale stake_table_from_fn(std::size_t depth,
                                          const std::function<Rational(const BitString&)>& fn);

  private:
    std::shared_ptr<const MartingaleNode> node_;
};

struct FairnessReport {
    enum class Status { ok, unfair, nonpositive, eval_error };

    Status status = Status::ok;
    std::size_t depth = 0;
    std::optional<BitString> witness;
    std::string message;

    bool ok() const { return status == Status::ok; }
    std::string status_name() const;
};

// Verifies 2*M(x) = M(x0)+M(x1) exactly for every |x| < depth and that
// every evaluated value is positive. First violation in
// shortest-then-lexicographic order.
FairnessReport fairness_check(const Martingale& m, std::size_t depth);

// Copy of b that does not bet until length n: value 1 on |x| <= n,
// then b(x)/b(x|n).
Martingale delayed(Martingale b, std::size_t n);

// sum_r 2^-r * child_r plus the constant tail 2^-k_max standing for the
// copies that have not started.
Martingale weighted_sum(std::vector<Martingale> children);

// General form with explicit positive weights and constant tail.
Martingale weighted_sum(std::vector<Martingale> children, std::vector<Rational> weights,
                        Rational tail);

// Two-account transform: a savings account s (monotone along extensions)
// plus an active account a that rebets m's relative stakes and transfers
// to s whenever it reaches 2. Result never drops more than 2 below any
// earlier value.
Martingale savings_transform(Martingale m);

// (s, a) accounts of the savings transform of `base` at x; s + a is the
// transformed value.
std::pair<Rational, Rational> savings_accounts(const Martingale& base, const BitString& x);

// M(Z|n) for n = 0..steps.
std::vector<std::pair<std::size_t, Rational>> capital_trace(const Martingale& m,
                                                            const SequenceOracle& z,
                                                            std::size_t steps);

// CSV rows under the header "step,prefix,numerator,denominator".
void write_trace_csv(std::ostream& out, const SequenceOracle& z,
                     const std::vector<std::pair<std::size_t, Rational>>& trace);

// --- concrete nodes (exposed for the serializer) ---

class ConstantNode final : public MartingaleNode {
  public:
    explicit ConstantNode(Rational c);
    Rational value(const BitString&) const override { return c_; }
    std::string kind() const override { return "constant"; }
    const Rational& constant() const { return c_; }

  private:
    Rational c_;
};

class FavorBitNode final : public MartingaleNode {
  public:
    FavorBitNode(int bit, Rational factor, Rational initial);
    Rational value(const BitString& x) const override;
    std::string kind() const override { return "favor_bit"; }
    int favored_bit() const { return bit_; }
    const Rational& factor() const { return factor_; }
    const Rational& initial() const { return initial_; }

  private:
    int bit_;
    Rational factor_;
    Rational initial_;
};

class StakeTableNode final : public MartingaleNode {
  public:
    StakeTableNode(std::size_t depth, std::vector<Rational> values);
    Rational value(const BitString& x) const override;
    std::string kind() const override { return "stake_table"; }
    std::size_t depth() const { return depth_; }
    const std::vector<Rational>& values() const { return values_; }

  private:
    std::size_t depth_;
    std::vector<Rational> values_;
};

class DelayedNode final : public MartingaleNode {
  public:
    DelayedNode(Martingale child, std::size_t delay);
    Rational value(const BitString& x) const override;
    std::string kind() const override { return "delayed"; }
    const Martingale& child() const { return child_; }
    std::size_t delay() const { return delay_; }

  private:
    Martingale child_;
    std::size_t delay_;
};

class WeightedSumNode final : public MartingaleNode {
  public:
    WeightedSumNode(std::vector<Martingale> children, std::vector<Rational> weights, Rational tail);
    Rational value(const BitString& x) const override;
    std::string kind() const override { return "weighted_sum"; }
    const std::vector<Martingale>& children() const { return children_; }
    const std::vector<Rational>& weights() const { return weights_; }
    const Rational& tail() const { return tail_; }

  private:
    std::vector<Martingale> children_;
    std::vector<Rational> weights_;
    Rational tail_;
};

class SavingsNode final : public MartingaleNode {
  public:
    explicit SavingsNode(Martingale child) : child_(std::move(child)) {}
    Rational value(const BitString& x) const override;
    std::string kind() const override { return "savings"; }
    const Martingale& child() const { return child_; }

  private:
    Martingale child_;
};

}  // namespace martlab
