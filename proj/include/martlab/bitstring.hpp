#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "martlab/errors.hpp"

namespace martlab {

// Finite word over {0,1}. Value semantics; strings here stay short
// (enumeration depths), so copies are cheap.
class BitString {
  public:
    BitString() = default;

    static BitString parse(std::string_view s) {
        BitString x;
        x.bits_.reserve(s.size());
        for (char c : s) {
            if (c != '0' && c != '1')
                throw ParseError("bad bit string: \"" + std::string(s) + "\"");
            x.bits_.push_back(static_cast<std::uint8_t>(c - '0'));
        }
        return x;
    }

    static BitString repeated(std::size_t n, int bit) {
        BitString x;
        x.bits_.assign(n, static_cast<std::uint8_t>(bit != 0));
        return x;
    }

    // Enumeration order: index 0..2^len-1 maps to strings in
    // lexicographic order (index bit len-1-i is position i).
    static BitString from_index(std::size_t len, std::uint64_t index) {
        BitString x;
        x.bits_.resize(len);
        for (std::size_t i = 0; i < len; ++i)
            x.bits_[i] = static_cast<std::uint8_t>((index >> (len - 1 - i)) & 1u);
        return x;
    }

    std::uint64_t to_index() const {
        std::uint64_t v = 0;
        for (std::uint8_t b : bits_) v = (v << 1) | b;
        return v;
    }

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }

    int bit(std::size_t i) const { return bits_[i]; }
    int operator[](std::size_t i) const { return bits_[i]; }

    void push_back(int b) { bits_.push_back(static_cast<std::uint8_t>(b != 0)); }
    void pop_back() { bits_.pop_back(); }

    BitString append(int b) const {
        BitString x = *this;
        x.push_back(b);
        return x;
    }

    // x|n, the first n bits.
    BitString prefix(std::size_t n) const {
        BitString x;
        x.bits_.assign(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(n));
        return x;
    }

    BitString substr(std::size_t from, std::size_t count) const {
        BitString x;
        x.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(from),
                       bits_.begin() + static_cast<std::ptrdiff_t>(from + count));
        return x;
    }

    bool is_prefix_of(const BitString& y) const {
        if (size() > y.size()) return false;
        for (std::size_t i = 0; i < size(); ++i)
            if (bits_[i] != y.bits_[i]) return false;
        return true;
    }

    bool extends(const BitString& y) const { return y.is_prefix_of(*this); }

    bool operator==(const BitString& o) const { return bits_ == o.bits_; }
    bool operator!=(const BitString& o) const { return bits_ != o.bits_; }

    // Strict lexicographic order on equal-length strings; shorter
    // strings compare by prefix order first.
    bool lex_less(const BitString& o) const { return bits_ < o.bits_; }

    std::string str() const {
        std::string s;
        s.reserve(bits_.size());
        for (std::uint8_t b : bits_) s.push_back(static_cast<char>('0' + b));
        return s;
    }

  private:
    std::vector<std::uint8_t> bits_;
};

}  // namespace martlab
