#include "radrel/bitarray.hpp"

#include <bit>

namespace radrel {

std::uint64_t BitArray::popcount() const {
    std::uint64_t n = 0;
    for (std::uint64_t w : words_) n += std::uint64_t(std::popcount(w));
    return n;
}

std::vector<std::uint8_t> BitArray::to_bytes() const {
    std::vector<std::uint8_t> bytes(byte_size(), 0);
    for (std::size_t i = 0; i < bytes.size(); ++i)
        bytes[i] = std::uint8_t((words_[i / 8] >> ((i % 8) * 8)) & 0xFF);
    return bytes;
}

BitArray BitArray::from_bytes(std::span<const std::uint8_t> bytes, std::uint64_t bit_count) {
    if (bytes.size() != (bit_count + 7) / 8)
        throw ValidationError("bit array byte length does not match the declared bit count");
    BitArray a(bit_count);
    for (std::size_t i = 0; i < bytes.size(); ++i)
        a.words_[i / 8] |= std::uint64_t(bytes[i]) << ((i % 8) * 8);
    // Clear any padding bits beyond bit_count.
    const std::uint64_t tail = bit_count % kWordBits;
    if (tail != 0 && !a.words_.empty())
        a.words_.back() &= (std::uint64_t(1) << tail) - 1;
    return a;
}

} // namespace radrel
