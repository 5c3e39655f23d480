#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace pepfsm {

// Fixed-universe bitset over peptide ids. Used for automaton output sets and
// partial match vectors; the universe is the size of the pool the machine was
// built from.
class IdSet {
public:
    IdSet() = default;

    explicit IdSet(std::size_t universe)
        : universe_(universe), words_((universe + 63) / 64, 0) {}

    std::size_t universe() const { return universe_; }

    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }

    bool test(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1;
    }

    bool any() const {
        for (auto w : words_)
            if (w) return true;
        return false;
    }

    bool none() const { return !any(); }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(__builtin_popcountll(w));
        return n;
    }

    IdSet& operator|=(const IdSet& other) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
        return *this;
    }

    IdSet& operator&=(const IdSet& other) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
        return *this;
    }

    friend IdSet operator&(IdSet a, const IdSet& b) { return a &= b; }
    friend IdSet operator|(IdSet a, const IdSet& b) { return a |= b; }

    bool operator==(const IdSet&) const = default;

    std::vector<std::size_t> to_indices() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < universe_; ++i)
            if (test(i)) out.push_back(i);
        return out;
    }

    // Hex rendering of the bitset value (bit 0 = peptide 0 = LSB), leading
    // zeroes stripped; the empty set renders as "0x0".
    std::string to_hex() const {
        static const char digits[] = "0123456789abcdef";
        std::string hex;
        for (std::size_t nibble = (universe_ + 3) / 4; nibble-- > 0;) {
            std::size_t bit = nibble * 4;
            unsigned v = (words_[bit >> 6] >> (bit & 63)) & 0xf;
            if (hex.empty() && v == 0) continue;
            hex.push_back(digits[v]);
        }
        if (hex.empty()) hex = "0";
        return "0x" + hex;
    }

private:
    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace pepfsm
