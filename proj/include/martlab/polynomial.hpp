#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "martlab/errors.hpp"
#include "martlab/rational.hpp"

namespace martlab {

// Non-constant polynomial with natural coefficients, c0 + c1*n + c2*n^2 + ...
// Evaluation is exact (big integers); positions that must fit the 64-bit
// interface go through eval_u64.
class PolynomialNat {
  public:
    explicit PolynomialNat(std::vector<std::uint64_t> coeffs) : coeffs_(std::move(coeffs)) {
        while (coeffs_.size() > 1 && coeffs_.back() == 0) coeffs_.pop_back();
        bool nonconstant = false;
        for (std::size_t i = 1; i < coeffs_.size(); ++i)
            if (coeffs_[i] > 0) nonconstant = true;
        if (!nonconstant)
            throw PreconditionError("polynomial must have a positive coefficient of degree >= 1");
    }

    Int eval(const Int& n) const {
        Int acc = 0;
        for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * n + coeffs_[i];
        return acc;
    }

    Int eval(std::uint64_t n) const { return eval(Int(n)); }

    std::uint64_t eval_u64(std::uint64_t n) const {
        Int v = eval(Int(n));
        if (v > std::numeric_limits<std::uint64_t>::max())
            throw RangeError("polynomial value does not fit 64 bits");
        return static_cast<std::uint64_t>(v);
    }

    // Sum of eval(k) for k < n, exact.
    Int prefix_sum(std::uint64_t n) const {
        Int acc = 0;
        for (std::uint64_t k = 0; k < n; ++k) acc += eval(Int(k));
        return acc;
    }

    std::size_t degree() const { return coeffs_.size() - 1; }
    const std::vector<std::uint64_t>& coeffs() const { return coeffs_; }

    bool operator==(const PolynomialNat& o) const { return coeffs_ == o.coeffs_; }

  private:
    std::vector<std::uint64_t> coeffs_;
};

}  // namespace martlab
