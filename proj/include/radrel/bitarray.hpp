#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "radrel/errors.hpp"

namespace radrel {

/// Packed bit array. Bit i lives at word i/64, position i%64; the byte
/// serialisation is little-endian with LSB-first bit order, padded to a
/// byte boundary (the layout used by the readback container format).
class BitArray {
public:
    static constexpr std::uint64_t kWordBits = 64;

    BitArray() = default;
    explicit BitArray(std::uint64_t bit_count)
        : bit_count_(bit_count), words_((bit_count + kWordBits - 1) / kWordBits, 0) {}

    std::uint64_t size() const { return bit_count_; }
    std::size_t word_count() const { return words_.size(); }
    std::span<const std::uint64_t> words() const { return words_; }

    bool test(std::uint64_t i) const {
        check(i);
        return (words_[i / kWordBits] >> (i % kWordBits)) & 1u;
    }
    void set(std::uint64_t i, bool value = true) {
        check(i);
        const std::uint64_t mask = std::uint64_t(1) << (i % kWordBits);
        if (value)
            words_[i / kWordBits] |= mask;
        else
            words_[i / kWordBits] &= ~mask;
    }
    void flip(std::uint64_t i) {
        check(i);
        words_[i / kWordBits] ^= std::uint64_t(1) << (i % kWordBits);
    }

    std::uint64_t popcount() const;

    std::size_t byte_size() const { return (bit_count_ + 7) / 8; }
    std::vector<std::uint8_t> to_bytes() const;
    static BitArray from_bytes(std::span<const std::uint8_t> bytes, std::uint64_t bit_count);

    bool operator==(const BitArray&) const = default;

private:
    void check(std::uint64_t i) const {
        if (i >= bit_count_) throw ValidationError("bit index out of range");
    }

    std::uint64_t bit_count_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace radrel
