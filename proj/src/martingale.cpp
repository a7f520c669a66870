#include "martlab/martingale.hpp"

#include <utility>

#include "martlab/errors.hpp"

namespace martlab {

// --- nodes ---

ConstantNode::ConstantNode(Rational c) : c_(std::move(c)) {
    if (c_ <= 0) throw PreconditionError("constant martingale requires a positive value");
}

FavorBitNode::FavorBitNode(int bit, Rational factor, Rational initial)
    : bit_(bit != 0), factor_(std::move(factor)), initial_(std::move(initial)) {
    if (factor_ <= 0 || factor_ >= 2)
        throw PreconditionError("favor_bit factor must lie strictly between 0 and 2");
    if (initial_ <= 0) throw PreconditionError("favor_bit initial capital must be positive");
}

Rational FavorBitNode::value(const BitString& x) const {
    Rational v = initial_;
    const Rational against = Rational(2) - factor_;
    for (std::size_t i = 0; i < x.size(); ++i) v *= (x.bit(i) == bit_ ? factor_ : against);
    return v;
}

StakeTableNode::StakeTableNode(std::size_t depth, std::vector<Rational> values)
    : depth_(depth), values_(std::move(values)) {
    if (depth_ > 20) throw PreconditionError("stake table depth too large");
    const std::size_t expect = (std::size_t{1} << (depth_ + 1)) - 1;
    if (values_.size() != expect)
        throw ParseError("malformed stake table: expected " + std::to_string(expect) +
                         " values for depth " + std::to_string(depth_) + ", got " +
                         std::to_string(values_.size()));
}

Rational StakeTableNode::value(const BitString& x) const {
    if (x.size() > depth_)
        throw EvalError("stake_table of depth " + std::to_string(depth_) +
                        " queried at length " + std::to_string(x.size()));
    std::size_t idx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) idx = 2 * idx + 1 + static_cast<std::size_t>(x.bit(i));
    return values_[idx];
}

DelayedNode::DelayedNode(Martingale child, std::size_t delay)
    : child_(std::move(child)), delay_(delay) {}

Rational DelayedNode::value(const BitString& x) const {
    if (x.size() <= delay_) return Rational(1);
    Rational base = child_.value(x.prefix(delay_));
    if (base == 0) throw EvalError("delayed: child vanishes at the delay point");
    return child_.value(x) / base;
}

WeightedSumNode::WeightedSumNode(std::vector<Martingale> children, std::vector<Rational> weights,
                                 Rational tail)
    : children_(std::move(children)), weights_(std::move(weights)), tail_(std::move(tail)) {
    if (children_.empty()) throw PreconditionError("weighted_sum requires at least one child");
    if (children_.size() != weights_.size())
        throw PreconditionError("weighted_sum: one weight per child");
    for (const Rational& w : weights_)
        if (w <= 0) throw PreconditionError("weighted_sum weights must be positive");
    if (tail_ < 0) throw PreconditionError("weighted_sum tail must be non-negative");
}

Rational WeightedSumNode::value(const BitString& x) const {
    Rational acc = tail_;
    for (std::size_t r = 0; r < children_.size(); ++r) acc += weights_[r] * children_[r].value(x);
    return acc;
}

namespace {

// Walks the two-account rule along x: a rebets the child's relative
// stakes and transfers a-1 into s whenever a reaches 2.
std::pair<Rational, Rational> savings_walk(const Martingale& child, const BitString& x) {
    Rational s(0);
    Rational a(1);
    Rational prev = child.value(BitString());
    if (prev <= 0) throw EvalError("savings: child must be positive");
    for (std::size_t i = 0; i < x.size(); ++i) {
        Rational cur = child.value(x.prefix(i + 1));
        if (cur <= 0) throw EvalError("savings: child must be positive");
        a = a * cur / prev;
        if (a >= 2) {
            s += a - 1;
            a = Rational(1);
        }
        prev = cur;
    }
    return {s, a};
}

}  // namespace

Rational SavingsNode::value(const BitString& x) const {
    auto [s, a] = savings_walk(child_, x);
    return s + a;
}

std::pair<Rational, Rational> savings_accounts(const Martingale& base, const BitString& x) {
    return savings_walk(base, x);
}

// --- factories ---

Martingale Martingale::constant(Rational c) {
    return Martingale(std::make_shared<ConstantNode>(std::move(c)));
}

Martingale Martingale::favor_bit(int bit, Rational factor, Rational initial) {
    return Martingale(std::make_shared<FavorBitNode>(bit, std::move(factor), std::move(initial)));
}

Martingale Martingale::stake_table(std::size_t depth, std::vector<Rational> values) {
    return Martingale(std::make_shared<StakeTableNode>(depth, std::move(values)));
}

Martingale Martingale::stake_table_from_fn(std::size_t depth,
                                           const std::function<Rational(const BitString&)>& fn) {
    const std::size_t count = (std::size_t{1} << (depth + 1)) - 1;
    std::vector<Rational> values(count);
    // Heap order: walk strings breadth-first.
    std::vector<BitString> layer{BitString()};
    std::size_t idx = 0;
    for (std::size_t len = 0; len <= depth; ++len) {
        std::vector<BitString> next;
        for (const BitString& x : layer) {
            values[idx++] = fn(x);
            if (len < depth) {
                next.push_back(x.append(0));
                next.push_back(x.append(1));
            }
        }
        layer = std::move(next);
    }
    return stake_table(depth, std::move(values));
}

Martingale delayed(Martingale b, std::size_t n) {
    return Martingale(std::make_shared<DelayedNode>(std::move(b), n));
}

Martingale weighted_sum(std::vector<Martingale> children) {
    if (children.empty()) throw PreconditionError("weighted_sum requires at least one child");
    std::vector<Rational> weights;
    weights.reserve(children.size());
    for (std::size_t r = 0; r < children.size(); ++r) weights.push_back(pow2(-(long long)r));
    Rational tail = pow2(-(long long)(children.size() - 1));
    return weighted_sum(std::move(children), std::move(weights), std::move(tail));
}

Martingale weighted_sum(std::vector<Martingale> children, std::vector<Rational> weights,
                        Rational tail) {
    return Martingale(std::make_shared<WeightedSumNode>(std::move(children), std::move(weights),
                                                        std::move(tail)));
}

Martingale savings_transform(Martingale m) {
    return Martingale(std::make_shared<SavingsNode>(std::move(m)));
}

// --- fairness ---

std::string FairnessReport::status_name() const {
    switch (status) {
        case Status::ok: return "ok";
        case Status::unfair: return "unfair";
        case Status::nonpositive: return "nonpositive";
        case Status::eval_error: return "eval_error";
    }
    return "?";
}

FairnessReport fairness_check(const Martingale& m, std::size_t depth) {
    FairnessReport report;
    report.depth = depth;
    BitString current;
    try {
        Rational root = m.value(current);
        if (root <= 0) {
            report.status = FairnessReport::Status::nonpositive;
            report.witness = current;
            return report;
        }
        // Shortest-then-lexicographic scan; heap layer by layer.
        std::vector<std::pair<BitString, Rational>> layer{{current, root}};
        for (std::size_t len = 0; len < depth; ++len) {
            std::vector<std::pair<BitString, Rational>> next;
            next.reserve(layer.size() * 2);
            for (auto& [x, vx] : layer) {
                current = x;
                Rational v0 = m.value(x.append(0));
                Rational v1 = m.value(x.append(1));
                if (v0 <= 0 || v1 <= 0) {
                    report.status = FairnessReport::Status::nonpositive;
                    report.witness = v0 <= 0 ? x.append(0) : x.append(1);
                    return report;
                }
                if (2 * vx != v0 + v1) {
                    report.status = FairnessReport::Status::unfair;
                    report.witness = x;
                    return report;
                }
                next.emplace_back(x.append(0), std::move(v0));
                next.emplace_back(x.append(1), std::move(v1));
            }
            layer = std::move(next);
        }
    } catch (const EvalError& e) {
        report.status = FairnessReport::Status::eval_error;
        report.witness = current;
        report.message = e.what();
    }
    return report;
}

std::vector<std::pair<std::size_t, Rational>> capital_trace(const Martingale& m,
                                                            const SequenceOracle& z,
                                                            std::size_t steps) {
    std::vector<std::pair<std::size_t, Rational>> trace;
    trace.reserve(steps + 1);
    BitString x;
    trace.emplace_back(0, m.value(x));
    for (std::size_t n = 1; n <= steps; ++n) {
        x.push_back(z.bit(n - 1));
        trace.emplace_back(n, m.value(x));
    }
    return trace;
}

void write_trace_csv(std::ostream& out, const SequenceOracle& z,
                     const std::vector<std::pair<std::size_t, Rational>>& trace) {
    out << "step,prefix,numerator,denominator\n";
    for (const auto& [n, v] : trace) {
        out << n << ',' << z.prefix(n).str() << ',' << numerator(v).str() << ','
            << denominator(v).str() << '\n';
    }
}

}  // namespace martlab
