#include "martlab/constructions.hpp"

#include <algorithm>
#include <limits>
#include <utility>

namespace martlab {

namespace {

std::uint64_t to_u64(const Int& v, const char* what) {
    if (v < 0 || v > std::numeric_limits<std::uint64_t>::max())
        throw RangeError(std::string(what) + " does not fit 64 bits");
    return static_cast<std::uint64_t>(v);
}

}  // namespace

// --- leftmost non-ascending path ---

BitString leftmost_path(const Martingale& l, std::size_t length) {
    BitString z;
    Rational here = l.value(z);
    for (std::size_t m = 0; m < length; ++m) {
        Rational left = l.value(z.append(0));
        if (left <= here) {
            z.push_back(0);
            here = std::move(left);
        } else {
            z.push_back(1);
            here = l.value(z);
        }
    }
    return z;
}

int LeftmostPathRule::bit(std::uint64_t pos) const {
    std::lock_guard<std::mutex> lock(mu_);
    while (path_.size() <= pos) {
        Rational here = l_.value(path_);
        if (l_.value(path_.append(0)) <= here)
            path_.push_back(0);
        else
            path_.push_back(1);
    }
    return path_.bit(static_cast<std::size_t>(pos));
}

SequenceOracle leftmost_path_oracle(Martingale l) {
    return SequenceOracle(std::make_shared<LeftmostPathRule>(std::move(l)));
}

// --- delay points ---

DelayPoints delay_points(const std::vector<Martingale>& b_list,
                         const std::vector<PolynomialNat>& q_list, const Permutation& s,
                         std::size_t k_max, std::uint64_t search_budget) {
    if (b_list.size() < k_max + 1)
        throw PreconditionError("delay_points: need a martingale for every index up to k_max");
    if (q_list.size() < k_max)
        throw PreconditionError("delay_points: need a bound polynomial for every step");
    // q(n) - n is non-decreasing for natural non-constant q, so q(0) >= 2
    // is exactly q(n) >= n+2 everywhere.
    for (std::size_t k = 0; k < k_max; ++k)
        if (q_list[k].eval(std::uint64_t{0}) < 2)
            throw PreconditionError("delay_points: q_" + std::to_string(k) +
                                    " must satisfy q(n) >= n+2");

    DelayPoints result;
    result.points.push_back(0);
    for (std::size_t k = 0; k < k_max; ++k) {
        bool found = false;
        for (std::uint64_t n = result.points.back() + 1; n <= search_budget; ++n) {
            result.searched_to = n;
            if (q_list[k].eval(Int(s.forward(n)) + 1) <= n) {
                result.points.push_back(n);
                found = true;
                break;
            }
        }
        if (!found) {
            result.exhausted = true;
            result.searched_to = search_budget;
            break;
        }
    }
    return result;
}

Martingale delayed_weighted_sum(const std::vector<Martingale>& b_list,
                                const std::vector<std::uint64_t>& points) {
    if (points.empty() || b_list.size() < points.size())
        throw PreconditionError("delayed_weighted_sum: one delay point per martingale");
    std::vector<Martingale> children;
    children.reserve(points.size());
    for (std::size_t r = 0; r < points.size(); ++r)
        children.push_back(delayed(b_list[r], static_cast<std::size_t>(points[r])));
    return weighted_sum(std::move(children));
}

// --- dishonest permutation ---

Int cantor_pair(const Int& k, const Int& i) {
    Int s = k + i;
    return s * (s + 1) / 2 + i;
}

std::pair<Int, Int> cantor_unpair(const Int& n) {
    Int disc = 8 * n + 1;
    Int w = (sqrt(disc) - 1) / 2;
    Int t = w * (w + 1) / 2;
    Int i = n - t;
    return {w - i, i};
}

// Early exit is sound: u >= 1 whenever k >= 1, so the partial products
// only grow.
bool pk_at_most(const Int& k, const Int& u, const Int& bound) {
    if (k == 0) return true;
    Int acc = 1;
    for (Int e = 0; e < k; ++e) {
        acc *= u;
        if (k * (acc + 1) > bound) return false;
    }
    return k * (acc + 1) <= bound;
}

Int pk_poly(const Int& k, const Int& u) {
    if (k == 0) return 0;
    Int acc = 1;
    for (Int e = 0; e < k; ++e) acc *= u;
    return k * (acc + 1);
}

Int dishonest_forward(const Int& n) {
    auto [k, i] = cantor_unpair(n);
    Int row_head = cantor_pair(k, 0);
    if (!pk_at_most(k, row_head, n)) return cantor_pair(k, i + 1);
    if (i == 0) return n;  // the row's cycle is the singleton <k,0>
    if (!pk_at_most(k, row_head, cantor_pair(k, i - 1))) return row_head;
    return n;
}

Int dishonest_inverse(const Int& m) {
    auto [k, j] = cantor_unpair(m);
    Int row_head = cantor_pair(k, 0);
    if (j >= 1) {
        Int pred = cantor_pair(k, j - 1);
        return pk_at_most(k, row_head, pred) ? m : pred;
    }
    if (pk_at_most(k, row_head, row_head)) return m;
    // Preimage of the row head is the least row element at or above p_k(<k,0>).
    Int target = pk_poly(k, row_head);
    Int lo = 0, hi = 1;
    while (cantor_pair(k, hi) < target) hi *= 2;
    while (lo < hi) {
        Int mid = (lo + hi) / 2;
        if (cantor_pair(k, mid) >= target)
            hi = mid;
        else
            lo = mid + 1;
    }
    return cantor_pair(k, lo);
}

std::uint64_t DishonestPermRule::forward(std::uint64_t n) const {
    return to_u64(dishonest_forward(Int(n)), "dishonest image");
}

std::uint64_t DishonestPermRule::inverse(std::uint64_t n) const {
    return to_u64(dishonest_inverse(Int(n)), "dishonest preimage");
}

Permutation dishonest_permutation() {
    return Permutation(std::make_shared<DishonestPermRule>());
}

// --- interleaving ---

BitString interleave_z(const PrefixFunction& a, const SequenceOracle& b, std::size_t length) {
    BitString z;
    for (std::size_t i = 0; i < length; ++i) {
        if (i % 2 == 0)
            z.push_back(b.bit(i / 2));
        else
            z.push_back(a.bit(z));
    }
    return z;
}

int InterleavedRule::bit(std::uint64_t pos) const {
    std::lock_guard<std::mutex> lock(mu_);
    while (prefix_.size() <= pos) {
        if (prefix_.size() % 2 == 0)
            prefix_.push_back(b_.bit(prefix_.size() / 2));
        else
            prefix_.push_back(a_.bit(prefix_));
    }
    return prefix_.bit(static_cast<std::size_t>(pos));
}

namespace {

class PermutedRule final : public SequenceRule {
  public:
    PermutedRule(SequenceOracle z, Permutation s) : z_(std::move(z)), s_(std::move(s)) {}
    int bit(std::uint64_t pos) const override { return z_.bit(s_.forward(pos)); }
    std::string kind() const override { return "permuted"; }

  private:
    SequenceOracle z_;
    Permutation s_;
};

}  // namespace

SequenceOracle interleaved_oracle(PrefixFunction a, SequenceOracle b) {
    return SequenceOracle(std::make_shared<InterleavedRule>(std::move(a), std::move(b)));
}

SequenceOracle permuted_oracle(SequenceOracle z, Permutation s) {
    return SequenceOracle(std::make_shared<PermutedRule>(std::move(z), std::move(s)));
}

// --- block layout and rearrangement ---

BlockLayout::BlockLayout(PolynomialNat p)
    : p_(std::move(p)), cache_(std::make_shared<Cache>()) {}

void BlockLayout::extend(std::uint64_t n) const {
    while (cache_->pval.size() <= n) {
        std::uint64_t k = cache_->pval.size();
        std::uint64_t pk = p_.eval_u64(k);
        cache_->pval.push_back(pk);
        if (cache_->psum.back() > std::numeric_limits<std::uint64_t>::max() - pk)
            throw RangeError("block prefix sum does not fit 64 bits");
        cache_->psum.push_back(cache_->psum.back() + pk);
    }
}

std::uint64_t BlockLayout::p_at(std::uint64_t n) const {
    std::lock_guard<std::mutex> lock(cache_->mu);
    extend(n);
    return cache_->pval[static_cast<std::size_t>(n)];
}

std::uint64_t BlockLayout::prefix_sum(std::uint64_t n) const {
    std::lock_guard<std::mutex> lock(cache_->mu);
    if (n > 0) extend(n - 1);
    return cache_->psum[static_cast<std::size_t>(n)];
}

std::uint64_t BlockLayout::block_start(std::uint64_t n) const { return prefix_sum(n) + n; }

std::uint64_t BlockLayout::a_slot(std::uint64_t n) const { return block_start(n) + p_at(n); }

std::pair<std::uint64_t, std::uint64_t> BlockLayout::locate(std::uint64_t r) const {
    std::lock_guard<std::mutex> lock(cache_->mu);
    for (std::uint64_t n = 0;; ++n) {
        extend(n);
        std::uint64_t start = cache_->psum[static_cast<std::size_t>(n)] + n;
        std::uint64_t end = start + cache_->pval[static_cast<std::size_t>(n)];
        if (r <= end) return {n, r - start};
    }
}

std::uint64_t BlockRearrangementRule::forward(std::uint64_t r) const {
    auto [n, m] = layout_.locate(r);
    if (m < layout_.p_at(n)) return 2 * (layout_.prefix_sum(n) + m);
    return 2 * n + 1;
}

std::uint64_t BlockRearrangementRule::inverse(std::uint64_t t) const {
    if (t % 2 == 1) return layout_.a_slot((t - 1) / 2);
    std::uint64_t j = t / 2;
    for (std::uint64_t n = 0;; ++n) {
        if (j < layout_.prefix_sum(n + 1)) return layout_.block_start(n) + (j - layout_.prefix_sum(n));
    }
}

Permutation rearrangement_permutation(const PolynomialNat& p) {
    return Permutation(std::make_shared<BlockRearrangementRule>(p));
}

// --- synthetic randomized evaluator ---

SyntheticBPP::SyntheticBPP(PolynomialNat p, PrefixFunction target, std::uint64_t seed,
                           KeyMode key_mode, std::optional<std::uint64_t> bad_count_override)
    : p_(std::move(p)),
      target_(std::move(target)),
      seed_(seed),
      key_mode_(key_mode),
      bad_count_override_(bad_count_override),
      layout_(p_),
      cache_(std::make_shared<UnionCache>()) {}

SyntheticBPP SyntheticBPP::standard(std::uint64_t seed) {
    return SyntheticBPP(PolynomialNat({6, 4}), PrefixFunction::parity(), seed);
}

std::uint64_t SyntheticBPP::p_at(std::uint64_t n) const { return layout_.p_at(n); }

int SyntheticBPP::target_bit(const BitString& x) const {
    if (x.size() % 2 == 0) throw PreconditionError("target oracle takes odd-length strings");
    return target_.bit(x);
}

std::uint64_t SyntheticBPP::bad_count(std::uint64_t n) const {
    std::uint64_t pn = p_at(n);
    if (pn >= 63) throw BudgetError("synthetic evaluator: block too wide to enumerate");
    std::uint64_t total = std::uint64_t{1} << pn;
    if (bad_count_override_) return std::min(*bad_count_override_, total);
    std::uint64_t spent = 4 * n + 2;
    if (pn < spent) return 0;
    std::uint64_t e = pn - spent;
    return e >= 63 ? total : std::min(std::uint64_t{1} << e, total);
}

std::uint64_t SyntheticBPP::key_for(const BitString& x, std::uint64_t n) const {
    std::uint64_t pn = p_at(n);
    std::uint64_t raw = key_mode_ == KeyMode::shared
                            ? detail::splitmix64(seed_ ^ (0x9e3779b97f4a7c15ull * (n + 1)))
                            : detail::mix_bits(seed_, x);
    return pn >= 64 ? raw : raw & ((std::uint64_t{1} << pn) - 1);
}

bool SyntheticBPP::is_bad_pair(const BitString& x, const BitString& y) const {
    if (x.size() % 2 == 0) throw PreconditionError("evaluator takes odd-length inputs");
    std::uint64_t n = (x.size() - 1) / 2;
    if (y.size() != p_at(n))
        throw PreconditionError("evaluator: block " + std::to_string(n) + " takes " +
                                std::to_string(p_at(n)) + " random bits, got " +
                                std::to_string(y.size()));
    return (y.to_index() ^ key_for(x, n)) < bad_count(n);
}

int SyntheticBPP::evaluate(const BitString& x, const BitString& y) const {
    return target_bit(x) ^ (is_bad_pair(x, y) ? 1 : 0);
}

const std::vector<std::uint64_t>& SyntheticBPP::bad_union(std::uint64_t n,
                                                          const Budget& budget) const {
    {
        std::lock_guard<std::mutex> lock(cache_->mu);
        auto it = cache_->map.find(n);
        if (it != cache_->map.end()) return it->second;
    }
    std::uint64_t pn = p_at(n);
    if (pn >= 63 || 2 * n + 1 >= 63)
        throw BudgetError("bad_union: block too wide to enumerate");
    std::uint64_t ys = std::uint64_t{1} << pn;
    std::uint64_t xs = std::uint64_t{1} << (2 * n + 1);
    budget.require_runs(ys * xs, "bad_union");

    std::vector<std::uint64_t> bad;
    for (std::uint64_t yi = 0; yi < ys; ++yi) {
        BitString y = BitString::from_index(static_cast<std::size_t>(pn), yi);
        for (std::uint64_t xi = 0; xi < xs; ++xi) {
            BitString x = BitString::from_index(static_cast<std::size_t>(2 * n + 1), xi);
            if (evaluate(x, y) != target_bit(x)) {
                bad.push_back(yi);
                break;
            }
        }
    }
    std::lock_guard<std::mutex> lock(cache_->mu);
    return cache_->map.emplace(n, std::move(bad)).first->second;
}

MeasureReport bad_block_measure(const SyntheticBPP& alg, std::uint64_t n, const Budget& budget) {
    MeasureReport report;
    report.n = n;
    report.bad_count = alg.bad_union(n, budget).size();
    report.total = std::uint64_t{1} << alg.p_at(n);
    report.measure = Rational(Int(report.bad_count), Int(report.total));
    report.bound = pow2(-2 * static_cast<long long>(n) - 1);
    report.within_bound = report.measure <= report.bound;
    return report;
}

std::uint64_t per_input_error_count(const SyntheticBPP& alg, std::uint64_t n, const BitString& x,
                                    const Budget& budget) {
    std::uint64_t pn = alg.p_at(n);
    if (pn >= 63) throw BudgetError("per_input_error_count: block too wide");
    std::uint64_t ys = std::uint64_t{1} << pn;
    budget.require_runs(ys, "per_input_error_count");
    std::uint64_t count = 0;
    for (std::uint64_t yi = 0; yi < ys; ++yi) {
        BitString y = BitString::from_index(static_cast<std::size_t>(pn), yi);
        if (alg.evaluate(x, y) != alg.target_bit(x)) ++count;
    }
    return count;
}

// --- bin martingale ---

namespace {

// Number of members of the sorted set with the given prefix; prefixes
// index aligned ranges because set elements are numeric images of
// fixed-width strings.
std::uint64_t count_with_prefix(const std::vector<std::uint64_t>& sorted, const BitString& u,
                                std::uint64_t width) {
    std::uint64_t shift = width - u.size();
    std::uint64_t lo = u.to_index() << shift;
    std::uint64_t hi = lo + (std::uint64_t{1} << shift);
    auto a = std::lower_bound(sorted.begin(), sorted.end(), lo);
    auto b = std::lower_bound(sorted.begin(), sorted.end(), hi);
    return static_cast<std::uint64_t>(b - a);
}

// Per-bin capital at w (positions of the raw random sequence). Complete
// blocks hold their final all-or-nothing value, the in-progress block
// the even-distribution count, blocks not yet reached their 2^-k-1; the
// tail entry collects everything from the first unreached block on.
std::vector<Rational> bin_values(const SyntheticBPP& alg, const BitString& w,
                                 const Budget& budget) {
    std::vector<Rational> bins;
    for (std::uint64_t k = 0;; ++k) {
        std::uint64_t start = alg.layout().prefix_sum(k);
        if (start >= w.size()) {
            bins.push_back(pow2(-static_cast<long long>(k)));  // tail: all unstarted bins
            return bins;
        }
        const Rational stake = pow2(-static_cast<long long>(k) - 1);
        std::uint64_t pk = alg.p_at(k);
        const auto& bad = alg.bad_union(k, budget);
        if (bad.empty()) {
            bins.push_back(stake);  // nothing to bet against; the bin rests
            continue;
        }
        std::uint64_t end = start + pk;
        if (end <= w.size()) {
            BitString y = w.substr(static_cast<std::size_t>(start), static_cast<std::size_t>(pk));
            bool hit = std::binary_search(bad.begin(), bad.end(), y.to_index());
            bins.push_back(hit ? stake * pow2(static_cast<long long>(pk)) / Int(bad.size())
                               : Rational(0));
        } else {
            BitString u = w.substr(static_cast<std::size_t>(start),
                                   static_cast<std::size_t>(w.size() - start));
            std::uint64_t c = count_with_prefix(bad, u, pk);
            bins.push_back(stake * pow2(static_cast<long long>(u.size())) * Int(c) /
                           Int(bad.size()));
            bins.push_back(pow2(-static_cast<long long>(k) - 1));  // tail after the open block
            return bins;
        }
    }
}

}  // namespace

Rational BinNode::value(const BitString& w) const {
    Rational total(0);
    for (const Rational& v : bin_values(alg_, w, budget_)) total += v;
    return total;
}

Martingale bin_martingale(SyntheticBPP alg, const Budget& budget) {
    return Martingale(std::make_shared<BinNode>(std::move(alg), budget));
}

std::vector<Rational> bin_breakdown(const SyntheticBPP& alg, const BitString& w,
                                    const Budget& budget) {
    return bin_values(alg, w, budget);
}

// --- predictor martingale ---

Rational PredictorNode::value(const BitString& w) const {
    const BlockLayout& layout = alg_.layout();
    BlockRearrangementRule rearr(layout.p());
    Rational v(1);
    for (std::uint64_t n = 0;; ++n) {
        std::uint64_t slot = layout.a_slot(n);
        if (slot >= w.size()) return v;
        BitString y = w.substr(static_cast<std::size_t>(layout.block_start(n)),
                               static_cast<std::size_t>(layout.p_at(n)));
        // The interleaved history below 2n+1 sits at earlier positions of
        // the rearranged word.
        BitString x;
        for (std::uint64_t i = 0; i < 2 * n + 1; ++i) {
            std::uint64_t pos = rearr.inverse(i);
            if (pos >= slot)
                throw EvalError("predictor: layout too thin to reconstruct history at block " +
                                std::to_string(n));
            x.push_back(w.bit(static_cast<std::size_t>(pos)));
        }
        int predicted = alg_.evaluate(x, y);
        v *= (w.bit(static_cast<std::size_t>(slot)) == predicted) ? Rational(3, 2)
                                                                  : Rational(1, 2);
    }
}

Martingale predictor_martingale(SyntheticBPP alg) {
    return Martingale(std::make_shared<PredictorNode>(std::move(alg)));
}

// --- end-to-end pipeline ---

std::vector<BlockReport> pipeline_run(const SyntheticBPP& alg, const SequenceOracle& base,
                                      std::size_t blocks, const Budget& budget) {
    SequenceOracle z = interleaved_oracle(alg.target(), base);
    std::vector<BlockReport> reports;
    reports.reserve(blocks);
    for (std::uint64_t n = 0; n < blocks; ++n) {
        BlockReport r;
        r.n = n;
        std::uint64_t start = alg.layout().prefix_sum(n);
        for (std::uint64_t m = 0; m < alg.p_at(n); ++m)
            r.y.push_back(base.bit(start + m));
        const auto& bad = alg.bad_union(n, budget);
        r.is_bad = std::binary_search(bad.begin(), bad.end(), r.y.to_index());

        BitString x = z.prefix(static_cast<std::size_t>(2 * n + 1));
        int predicted = alg.evaluate(x, r.y);
        r.prediction_correct = predicted == z.bit(2 * n + 1);
        r.h_factor = r.prediction_correct ? Rational(3, 2) : Rational(1, 2);

        if (bad.empty())
            r.bin_gain = pow2(-static_cast<long long>(n) - 1);
        else
            r.bin_gain = r.is_bad ? pow2(-static_cast<long long>(n) - 1) *
                                        pow2(static_cast<long long>(alg.p_at(n))) /
                                        Int(bad.size())
                                  : Rational(0);
        reports.push_back(std::move(r));
    }
    return reports;
}

}  // namespace martlab
