#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "martlab/bitstring.hpp"

namespace martlab {

namespace detail {
// SplitMix64; the standard stateless mixer, used wherever a seeded
// deterministic bit is needed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_bits(std::uint64_t seed, const BitString& x) {
    std::uint64_t h = splitmix64(seed ^ 0x5851f42d4c957f2dull);
    for (std::size_t i = 0; i < x.size(); ++i)
        h = splitmix64(h ^ (static_cast<std::uint64_t>(x.bit(i)) + 2 * i + 3));
    return h;
}
}  // namespace detail

// Total position -> bit rule for an "infinite" sequence. Deterministic:
// the same position always yields the same bit.
class SequenceRule {
  public:
    virtual ~SequenceRule() = default;
    virtual int bit(std::uint64_t pos) const = 0;
    virtual std::string kind() const = 0;
};

class SequenceOracle {
  public:
    explicit SequenceOracle(std::shared_ptr<const SequenceRule> rule) : rule_(std::move(rule)) {}

    int bit(std::uint64_t pos) const { return rule_->bit(pos); }

    BitString prefix(std::size_t n) const {
        BitString x;
        for (std::size_t i = 0; i < n; ++i) x.push_back(bit(i));
        return x;
    }

    const SequenceRule& rule() const { return *rule_; }

    static SequenceOracle constant(int b);
    static SequenceOracle from_prefix(BitString bits, int default_bit);
    static SequenceOracle pseudorandom(std::uint64_t seed);
    // Programmatic rule; usable everywhere but not serializable.
    static SequenceOracle from_fn(std::function<int(std::uint64_t)> fn, std::string name);

  private:
    std::shared_ptr<const SequenceRule> rule_;
};

class ExplicitPrefixRule final : public SequenceRule {
  public:
    ExplicitPrefixRule(BitString bits, int default_bit)
        : bits_(std::move(bits)), default_bit_(default_bit != 0) {}

    int bit(std::uint64_t pos) const override {
        return pos < bits_.size() ? bits_.bit(static_cast<std::size_t>(pos)) : default_bit_;
    }
    std::string kind() const override { return "prefix"; }

    const BitString& bits() const { return bits_; }
    int default_bit() const { return default_bit_; }

  private:
    BitString bits_;
    int default_bit_;
};

class PseudorandomRule final : public SequenceRule {
  public:
    explicit PseudorandomRule(std::uint64_t seed) : seed_(seed) {}

    int bit(std::uint64_t pos) const override {
        return static_cast<int>(detail::splitmix64(seed_ ^ (pos + 0x1234abcdull)) & 1u);
    }
    std::string kind() const override { return "pseudorandom"; }

    std::uint64_t seed() const { return seed_; }

  private:
    std::uint64_t seed_;
};

// Bit-valued function of a finite string; the membership oracles the
// interleaving construction feeds on odd positions.
class PrefixRule {
  public:
    virtual ~PrefixRule() = default;
    virtual int bit(const BitString& x) const = 0;
    virtual std::string kind() const = 0;
};

class PrefixFunction {
  public:
    explicit PrefixFunction(std::shared_ptr<const PrefixRule> rule) : rule_(std::move(rule)) {}

    int bit(const BitString& x) const { return rule_->bit(x); }
    const PrefixRule& rule() const { return *rule_; }

    static PrefixFunction constant(int b);
    static PrefixFunction parity();
    static PrefixFunction pseudorandom(std::uint64_t seed);

  private:
    std::shared_ptr<const PrefixRule> rule_;
};

class ConstantPrefixRule final : public PrefixRule {
  public:
    explicit ConstantPrefixRule(int b) : b_(b != 0) {}
    int bit(const BitString&) const override { return b_; }
    std::string kind() const override { return "constant"; }
    int constant_bit() const { return b_; }

  private:
    int b_;
};

class ParityPrefixRule final : public PrefixRule {
  public:
    int bit(const BitString& x) const override {
        int ones = 0;
        for (std::size_t i = 0; i < x.size(); ++i) ones ^= x.bit(i);
        return ones;
    }
    std::string kind() const override { return "parity"; }
};

class PseudorandomPrefixRule final : public PrefixRule {
  public:
    explicit PseudorandomPrefixRule(std::uint64_t seed) : seed_(seed) {}
    int bit(const BitString& x) const override {
        return static_cast<int>(detail::mix_bits(seed_, x) & 1u);
    }
    std::string kind() const override { return "pseudorandom"; }
    std::uint64_t seed() const { return seed_; }

  private:
    std::uint64_t seed_;
};

}  // namespace martlab
