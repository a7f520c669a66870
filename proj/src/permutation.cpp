#include "martlab/permutation.hpp"

#include <algorithm>

namespace martlab {

namespace {

class IdentityPermRule final : public PermRule {
  public:
    std::uint64_t forward(std::uint64_t n) const override { return n; }
    std::uint64_t inverse(std::uint64_t n) const override { return n; }
    std::string kind() const override { return "identity"; }
};

class PairSwapPermRule final : public PermRule {
  public:
    std::uint64_t forward(std::uint64_t n) const override { return n ^ 1u; }
    std::uint64_t inverse(std::uint64_t n) const override { return n ^ 1u; }
    std::string kind() const override { return "pair_swap"; }
};

}  // namespace

TablePermRule::TablePermRule(std::vector<std::uint64_t> image) : image_(std::move(image)) {
    const std::uint64_t n = image_.size();
    preimage_.assign(image_.size(), n);
    for (std::uint64_t i = 0; i < n; ++i) {
        std::uint64_t v = image_[i];
        if (v >= n || preimage_[v] != n)
            throw ParseError("table permutation is not a bijection of [0, " + std::to_string(n) +
                             ")");
        preimage_[v] = i;
    }
}

std::uint64_t TablePermRule::forward(std::uint64_t n) const {
    return n < image_.size() ? image_[n] : n;
}

std::uint64_t TablePermRule::inverse(std::uint64_t n) const {
    return n < preimage_.size() ? preimage_[n] : n;
}

Permutation Permutation::identity() {
    return Permutation(std::make_shared<IdentityPermRule>());
}

Permutation Permutation::pair_swap() {
    return Permutation(std::make_shared<PairSwapPermRule>());
}

Permutation Permutation::table(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs) {
    std::uint64_t domain = 0;
    for (const auto& [n, v] : pairs) domain = std::max({domain, n + 1, v + 1});
    std::vector<std::uint64_t> image(domain);
    std::vector<bool> given(domain, false);
    for (std::uint64_t i = 0; i < domain; ++i) image[i] = i;
    for (const auto& [n, v] : pairs) {
        if (given[n]) throw ParseError("table permutation: duplicate entry for " + std::to_string(n));
        given[n] = true;
        image[n] = v;
    }
    return Permutation(std::make_shared<TablePermRule>(std::move(image)));
}

}  // namespace martlab
