#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <algorithm>
#include <array>
#include <span>

#include "specgame/rng.hpp"

namespace specgame {

// Digit alphabets: quinary {-2,-1,0,1,2} maps to indices 0..4, quaternary
// {-2,-1,1,2} (no zero moves once the price is perturbed) maps to 0..3.
inline std::size_t encode_digit(int digit, std::size_t alphabet) {
    assert(alphabet == 4 || alphabet == 5);
    if (alphabet == 5) {
        assert(digit >= -2 && digit <= 2);
        return static_cast<std::size_t>(digit + 2);
    }
    assert(digit >= -2 && digit <= 2 && digit != 0);
    return static_cast<std::size_t>(digit < 0 ? digit + 2 : digit + 1);
}

inline int decode_digit(std::size_t index, std::size_t alphabet) {
    assert(index < alphabet);
    if (alphabet == 5) return static_cast<int>(index) - 2;
    return index < 2 ? static_cast<int>(index) - 2 : static_cast<int>(index) - 1;
}

// Rolling base-K index of the last M history digits; the lookup key shared by
// every strategy table in the market.
class PatternIndex {
public:
    PatternIndex(std::size_t alphabet, std::size_t memory)
        : alphabet_(alphabet), memory_(memory) {
        table_size_ = 1;
        for (std::size_t i = 0; i < memory_; ++i) table_size_ *= alphabet_;
        high_divisor_ = table_size_ / alphabet_;
    }

    // Rebuild from exactly M digits, oldest first.
    void reset(std::span<const std::int8_t> digits) {
        assert(digits.size() == memory_);
        value_ = 0;
        for (std::int8_t d : digits) value_ = value_ * alphabet_ + encode_digit(d, alphabet_);
    }

    void push(int digit) {
        value_ = (value_ % high_divisor_) * alphabet_ + encode_digit(digit, alphabet_);
    }

    std::size_t value() const { return value_; }
    std::size_t table_size() const { return table_size_; }
    std::size_t alphabet() const { return alphabet_; }
    std::size_t memory() const { return memory_; }

private:
    std::size_t alphabet_;
    std::size_t memory_;
    std::size_t table_size_ = 1;
    std::size_t high_divisor_ = 1;
    std::size_t value_ = 0;
};

// Fill strategy-table entries with actions drawn uniformly from {-1, 0, +1}.
// A table is total by construction: one entry per history pattern. Entries
// come 32 per RNG draw: a u64 is rejection-trimmed to a multiple of 3^32 and
// unpacked base-3, which keeps every trit exactly uniform while costing ~30x
// fewer engine draws than one call per entry (player replacement refills
// whole tables, so this is on the hot path).
inline void fill_random_strategies(std::span<std::int8_t> entries, Rng& rng) {
    constexpr std::uint64_t kPow3_32 = 1853020188851841ull;  // 3^32
    constexpr std::uint64_t kLimit = (UINT64_MAX / kPow3_32) * kPow3_32;
    // base-243 digits decode five trits at once
    static const auto lut = [] {
        std::array<std::array<std::int8_t, 5>, 243> table{};
        for (std::size_t v = 0; v < 243; ++v) {
            std::size_t rest = v;
            for (int k = 0; k < 5; ++k) {
                table[v][k] = static_cast<std::int8_t>(rest % 3) - 1;
                rest /= 3;
            }
        }
        return table;
    }();

    std::size_t i = 0;
    const std::size_t n = entries.size();
    while (i < n) {
        std::uint64_t block = rng.next_u64();
        while (block >= kLimit) block = rng.next_u64();
        block %= kPow3_32;
        if (n - i >= 32) {
            for (int g = 0; g < 6; ++g) {
                const auto& five = lut[block % 243];
                block /= 243;
                for (int k = 0; k < 5; ++k) entries[i + k] = five[k];
                i += 5;
            }
            entries[i++] = static_cast<std::int8_t>(block % 3) - 1;
            block /= 3;
            entries[i++] = static_cast<std::int8_t>(block % 3) - 1;
        } else {
            for (std::size_t k = i; k < n; ++k) {
                entries[k] = static_cast<std::int8_t>(block % 3) - 1;
                block /= 3;
            }
            i = n;
        }
    }
}

} // namespace specgame
