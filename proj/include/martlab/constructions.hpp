#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "martlab/martingale.hpp"
#include "martlab/permutation.hpp"
#include "martlab/polynomial.hpp"
#include "martlab/scanner.hpp"
#include "martlab/sequence.hpp"

namespace martlab {

// --- leftmost non-ascending path ---

// Z(m) = 0 iff L(Z|m . 0) <= L(Z|m); for a fair positive L the trace
// L(Z|m) never increases, and Z is lexicographically least among
// non-ascending paths.
BitString leftmost_path(const Martingale& l, std::size_t length);

SequenceOracle leftmost_path_oracle(Martingale l);

// --- delay points and the weighted sum of delayed copies ---

struct DelayPoints {
    std::vector<std::uint64_t> points;
    bool exhausted = false;          // search budget hit before the list completed
    std::uint64_t searched_to = 0;
};

// n_0 = 0; n_{k+1} is the least n > n_k with q_k(S(n)+1) <= n. Each q_k
// must satisfy q_k(n) >= n+2 (checked at q_k(0)). A partial list with
// the exhausted flag is returned when the scan passes search_budget.
DelayPoints delay_points(const std::vector<Martingale>& b_list,
                         const std::vector<PolynomialNat>& q_list, const Permutation& s,
                         std::size_t k_max, std::uint64_t search_budget);

// sum_r 2^-r delayed(b_r, points[r]) plus the unstarted-copies tail.
Martingale delayed_weighted_sum(const std::vector<Martingale>& b_list,
                                const std::vector<std::uint64_t>& points);

// --- the dishonest permutation ---

Int cantor_pair(const Int& k, const Int& i);
std::pair<Int, Int> cantor_unpair(const Int& n);

// p_k(u) = k(u^k + 1), the bound family indexing the rows.
Int pk_poly(const Int& k, const Int& u);
// p_k(u) <= bound without materializing huge powers.
bool pk_at_most(const Int& k, const Int& u, const Int& bound);

// Row k of the pairing is the finite cycle <k,0> -> <k,1> -> ... -> <k,i*>
// -> <k,0>, where <k,i*> is the least row element at or above
// p_k(<k,0>) with p_k(u) = k(u^k+1); identity beyond. Exact arithmetic;
// preimages of <k,0> grow far beyond 64 bits, hence the Int interface.
Int dishonest_forward(const Int& n);
Int dishonest_inverse(const Int& n);

// 64-bit view; throws RangeError when a value does not fit.
Permutation dishonest_permutation();

// --- interleaving and the block rearrangement ---

// Z(2n) = B(n), Z(2n+1) = A(Z|2n+1).
BitString interleave_z(const PrefixFunction& a, const SequenceOracle& b, std::size_t length);

SequenceOracle interleaved_oracle(PrefixFunction a, SequenceOracle b);

// Positionwise Z(S(n)); programmatic, not serializable.
SequenceOracle permuted_oracle(SequenceOracle z, Permutation s);

class LeftmostPathRule final : public SequenceRule {
  public:
    explicit LeftmostPathRule(Martingale l) : l_(std::move(l)) {}
    int bit(std::uint64_t pos) const override;
    std::string kind() const override { return "leftmost_path"; }
    const Martingale& martingale() const { return l_; }

  private:
    Martingale l_;
    mutable std::mutex mu_;
    mutable BitString path_;
};

class InterleavedRule final : public SequenceRule {
  public:
    InterleavedRule(PrefixFunction a, SequenceOracle b) : a_(std::move(a)), b_(std::move(b)) {}
    int bit(std::uint64_t pos) const override;
    std::string kind() const override { return "interleaved"; }
    const PrefixFunction& target() const { return a_; }
    const SequenceOracle& base() const { return b_; }

  private:
    PrefixFunction a_;
    SequenceOracle b_;
    mutable std::mutex mu_;
    mutable BitString prefix_;
};

// Block n = p(n) even-position bits followed by the odd-position bit
// 2n+1; start(n) = sum_{k<n} p(k) + n. Values and prefix sums are cached
// behind a lock; the cache is not observable.
class BlockLayout {
  public:
    explicit BlockLayout(PolynomialNat p);

    std::uint64_t p_at(std::uint64_t n) const;
    std::uint64_t prefix_sum(std::uint64_t n) const;   // sum_{k<n} p(k)
    std::uint64_t block_start(std::uint64_t n) const;  // first position of block n
    std::uint64_t a_slot(std::uint64_t n) const;       // last position of block n
    // Block containing position r, and r's offset within it.
    std::pair<std::uint64_t, std::uint64_t> locate(std::uint64_t r) const;

    const PolynomialNat& p() const { return p_; }

  private:
    struct Cache {
        std::mutex mu;
        std::vector<std::uint64_t> pval;
        std::vector<std::uint64_t> psum{0};  // psum[n] = sum_{k<n} p(k)
    };

    void extend(std::uint64_t n) const;  // ensure entries up to index n, under lock

    PolynomialNat p_;
    std::shared_ptr<Cache> cache_;
};

// S(start(n)+m) = 2(sum_{k<n} p(k) + m) for m < p(n); S(a_slot(n)) = 2n+1.
Permutation rearrangement_permutation(const PolynomialNat& p);

// --- synthetic randomized evaluator ---

enum class KeyMode {
    per_x,   // bad strings keyed by the input (default)
    shared,  // one bad set for every input of a block
};

// Stand-in for a randomized decision procedure: A = target, and
// R(x,y) = A(x) xor bad(x,y), where exactly bad_count(n) of the 2^p(n)
// random strings are bad per input. bad(x,y) holds iff y xor key is
// below the count, so per-input error mass is exactly
// bad_count(n)/2^p(n) <= 2^(-4n-2).
class SyntheticBPP {
  public:
    SyntheticBPP(PolynomialNat p, PrefixFunction target, std::uint64_t seed,
                 KeyMode key_mode = KeyMode::per_x,
                 std::optional<std::uint64_t> bad_count_override = std::nullopt);

    static SyntheticBPP standard(std::uint64_t seed);  // p(n)=4n+6, parity target

    std::uint64_t p_at(std::uint64_t n) const;
    int target_bit(const BitString& x) const;                      // A(x), |x| odd
    int evaluate(const BitString& x, const BitString& y) const;    // R(x,y)
    bool is_bad_pair(const BitString& x, const BitString& y) const;

    // Bad strings per input in block n (0 when the exponent underflows).
    std::uint64_t bad_count(std::uint64_t n) const;

    // Union over all inputs x of block n of the bad sets, as sorted
    // integers below 2^p(n). Cached; the cache is not observable.
    const std::vector<std::uint64_t>& bad_union(std::uint64_t n, const Budget& budget) const;

    const PolynomialNat& p() const { return p_; }
    const PrefixFunction& target() const { return target_; }
    std::uint64_t seed() const { return seed_; }
    KeyMode key_mode() const { return key_mode_; }
    std::optional<std::uint64_t> bad_count_override() const { return bad_count_override_; }
    const BlockLayout& layout() const { return layout_; }

  private:
    struct UnionCache {
        std::mutex mu;
        std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> map;
    };

    std::uint64_t key_for(const BitString& x, std::uint64_t n) const;

    PolynomialNat p_;
    PrefixFunction target_;
    std::uint64_t seed_;
    KeyMode key_mode_;
    std::optional<std::uint64_t> bad_count_override_;
    BlockLayout layout_;
    std::shared_ptr<UnionCache> cache_;
};

struct MeasureReport {
    std::uint64_t n = 0;
    std::uint64_t bad_count = 0;       // |union of bad sets|
    std::uint64_t total = 0;           // 2^p(n)
    Rational measure;                  // bad_count / total
    Rational bound;                    // 2^(-2n-1)
    bool within_bound = false;
};

// Exhaustive fraction of random strings y of block n on which the
// evaluator errs for some input x.
MeasureReport bad_block_measure(const SyntheticBPP& alg, std::uint64_t n,
                                const Budget& budget = {});

// Per-input error count |{y : R(x,y) != A(x)}|, exhaustive.
std::uint64_t per_input_error_count(const SyntheticBPP& alg, std::uint64_t n, const BitString& x,
                                    const Budget& budget = {});

// --- the two martingales of the rearrangement argument ---

// Bets on the raw random sequence: bin n holds 2^(-n-1), is wagered
// within block n of the random positions on the bad strings (evenly),
// and is frozen afterwards.
Martingale bin_martingale(SyntheticBPP alg, const Budget& budget = {});

// Contribution of each bin k <= last touched block to the value at w,
// plus the unstarted tail as the final entry.
std::vector<Rational> bin_breakdown(const SyntheticBPP& alg, const BitString& w,
                                    const Budget& budget = {});

// Bets on the rearranged sequence: archives each block's random bits
// without betting, reconstructs the interleaved history, predicts the
// block's final bit via the evaluator, and bets half its capital on the
// prediction (factor 3/2 right, 1/2 wrong).
Martingale predictor_martingale(SyntheticBPP alg);

struct BlockReport {
    std::uint64_t n = 0;
    BitString y;                     // the block's random bits
    bool is_bad = false;             // y in the bad union of block n
    bool prediction_correct = false; // R(x,y) agreed with the target on the actual x
    Rational h_factor;               // 3/2 or 1/2
    Rational bin_gain;               // bin n's final capital along the actual path
};

// End-to-end run: interleave the target with the base sequence,
// rearrange, and play both martingales for the first `blocks` blocks.
std::vector<BlockReport> pipeline_run(const SyntheticBPP& alg, const SequenceOracle& base,
                                      std::size_t blocks, const Budget& budget = {});

class BinNode final : public MartingaleNode {
  public:
    BinNode(SyntheticBPP alg, Budget budget) : alg_(std::move(alg)), budget_(budget) {}
    Rational value(const BitString& w) const override;
    std::string kind() const override { return "bin"; }
    const SyntheticBPP& alg() const { return alg_; }

  private:
    SyntheticBPP alg_;
    Budget budget_;
};

class PredictorNode final : public MartingaleNode {
  public:
    explicit PredictorNode(SyntheticBPP alg) : alg_(std::move(alg)) {}
    Rational value(const BitString& w) const override;
    std::string kind() const override { return "predictor"; }
    const SyntheticBPP& alg() const { return alg_; }

  private:
    SyntheticBPP alg_;
};

// Permutation rules live here so the serializer can name them.
class BlockRearrangementRule final : public PermRule {
  public:
    explicit BlockRearrangementRule(PolynomialNat p) : layout_(std::move(p)) {}
    std::uint64_t forward(std::uint64_t n) const override;
    std::uint64_t inverse(std::uint64_t n) const override;
    std::string kind() const override { return "block_rearrangement"; }
    const BlockLayout& layout() const { return layout_; }

  private:
    BlockLayout layout_;
};

class DishonestPermRule final : public PermRule {
  public:
    std::uint64_t forward(std::uint64_t n) const override;
    std::uint64_t inverse(std::uint64_t n) const override;
    std::string kind() const override { return "dishonest"; }
};

}  // namespace martlab
