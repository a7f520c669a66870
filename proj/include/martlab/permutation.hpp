#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "martlab/errors.hpp"

namespace martlab {

// Bijection of positions with an explicit inverse.
class PermRule {
  public:
    virtual ~PermRule() = default;
    virtual std::uint64_t forward(std::uint64_t n) const = 0;
    virtual std::uint64_t inverse(std::uint64_t n) const = 0;
    virtual std::string kind() const = 0;
};

class Permutation {
  public:
    explicit Permutation(std::shared_ptr<const PermRule> rule) : rule_(std::move(rule)) {}

    std::uint64_t forward(std::uint64_t n) const { return rule_->forward(n); }
    std::uint64_t inverse(std::uint64_t n) const { return rule_->inverse(n); }
    const PermRule& rule() const { return *rule_; }

    static Permutation identity();
    // 0<->1, 2<->3, ...
    static Permutation pair_swap();
    // Finite table of (n, S(n)) pairs, bijective on its domain [0, N);
    // identity outside.
    static Permutation table(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs);

  private:
    std::shared_ptr<const PermRule> rule_;
};

class TablePermRule final : public PermRule {
  public:
    explicit TablePermRule(std::vector<std::uint64_t> image);
    std::uint64_t forward(std::uint64_t n) const override;
    std::uint64_t inverse(std::uint64_t n) const override;
    std::string kind() const override { return "table"; }
    const std::vector<std::uint64_t>& image() const { return image_; }

  private:
    std::vector<std::uint64_t> image_;
    std::vector<std::uint64_t> preimage_;
};

}  // namespace martlab
