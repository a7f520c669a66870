#include "martlab/sequence.hpp"

#include <utility>

namespace martlab {

namespace {

class FnSequenceRule final : public SequenceRule {
  public:
    FnSequenceRule(std::function<int(std::uint64_t)> fn, std::string name)
        : fn_(std::move(fn)), name_(std::move(name)) {}
    int bit(std::uint64_t pos) const override { return fn_(pos) ? 1 : 0; }
    std::string kind() const override { return name_; }

  private:
    std::function<int(std::uint64_t)> fn_;
    std::string name_;
};

}  // namespace

SequenceOracle SequenceOracle::constant(int b) {
    return SequenceOracle(std::make_shared<ExplicitPrefixRule>(BitString(), b));
}

SequenceOracle SequenceOracle::from_prefix(BitString bits, int default_bit) {
    return SequenceOracle(std::make_shared<ExplicitPrefixRule>(std::move(bits), default_bit));
}

SequenceOracle SequenceOracle::pseudorandom(std::uint64_t seed) {
    return SequenceOracle(std::make_shared<PseudorandomRule>(seed));
}

SequenceOracle SequenceOracle::from_fn(std::function<int(std::uint64_t)> fn, std::string name) {
    return SequenceOracle(std::make_shared<FnSequenceRule>(std::move(fn), std::move(name)));
}

PrefixFunction PrefixFunction::constant(int b) {
    return PrefixFunction(std::make_shared<ConstantPrefixRule>(b));
}

PrefixFunction PrefixFunction::parity() {
    return PrefixFunction(std::make_shared<ParityPrefixRule>());
}

PrefixFunction PrefixFunction::pseudorandom(std::uint64_t seed) {
    return PrefixFunction(std::make_shared<PseudorandomPrefixRule>(seed));
}

}  // namespace martlab
