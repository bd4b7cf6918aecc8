#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "radrel/errors.hpp"

namespace radrel {

enum class MemoryKind { cram, bram, srl, cache_array };

std::string to_string(MemoryKind kind);
MemoryKind memory_kind_from_string(const std::string& s);

/// Frame-organised memory array. For cache arrays the "frame" is the ECC /
/// parity protection granule rather than a configuration frame; the grid
/// semantics (adjacency, shape placement, same-frame multiplicity) are the
/// same either way.
struct MemoryGeometry {
    std::string name;
    MemoryKind kind = MemoryKind::cram;
    std::uint32_t frame_count = 0;
    std::uint32_t bits_per_frame = 0;
    std::uint64_t total_bits = 0; // == frame_count * bits_per_frame
    // Granularity used for SEFI detection (e.g. one 36 Kb BRAM block, one
    // 256-bit SRL slice). 0 means the whole array is a single block.
    std::uint64_t block_bits = 0;

    void validate() const;
};

/// One flipped bit, located by readback cycle and (frame, bit) grid position.
struct UpsetBit {
    std::uint32_t cycle = 0;
    std::uint32_t frame = 0;
    std::uint32_t bit = 0;

    auto operator<=>(const UpsetBit&) const = default;
};

enum class UpsetClass {
    sbu,  // single bit
    mbu,  // >1 bit, all within one frame
    mcu,  // bits spanning >=2 frames
    sefi, // burst attributed to control-circuitry corruption; excluded from NSEU stats
};

std::string to_string(UpsetClass cls);

/// Translation-invariant footprint of an event: offsets normalised so the
/// minimum frame and bit deltas are both zero.
struct ShapeSignature {
    std::uint32_t frame_extent = 1;
    std::uint32_t bit_extent = 1;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> offsets; // sorted (dframe, dbit)

    static ShapeSignature from_bits(const std::vector<UpsetBit>& bits);
    static ShapeSignature from_offsets(std::vector<std::pair<std::uint32_t, std::uint32_t>> offsets);

    std::size_t multiplicity() const { return offsets.size(); }
    /// Compact form like "0,0;1,0" (frame,bit pairs), usable as a map key.
    std::string key() const;

    bool operator==(const ShapeSignature&) const = default;
    bool operator<(const ShapeSignature& other) const { return offsets < other.offsets; }
};

struct UpsetEvent {
    std::vector<UpsetBit> bits; // sorted, all from one readback cycle
    UpsetClass cls = UpsetClass::sbu;
    ShapeSignature shape;

    std::uint32_t cycle() const { return bits.empty() ? 0 : bits.front().cycle; }
};

/// Discrete distribution over event shapes. Probabilities are normalised to
/// sum to 1; the raw percentages as printed in a source table are kept for
/// reporting.
struct ShapeDistribution {
    struct Entry {
        ShapeSignature shape;
        double probability = 0;
        double raw_percent = 0;
        std::string label;
    };
    std::vector<Entry> entries;

    void validate() const;
    static ShapeDistribution from_raw_percentages(std::vector<Entry> entries);
    static ShapeDistribution single_bit_only();
};

/// Partition upsets of one readback cycle into events: two bits belong to the
/// same event iff they are connected through a chain of pairs at Chebyshev
/// distance <= 1 on the (frame, bit) grid. Classification: 1 bit -> SBU,
/// >1 bit in one frame -> MBU, bits spanning >=2 frames -> MCU.
std::vector<UpsetEvent> cluster_events(std::vector<UpsetBit> bits, const MemoryGeometry& geometry);

/// Reclassify as SEFI any event whose bit count within a single memory block
/// exceeds threshold_bits. SEFI events are excluded from NSEU cross-section
/// input by the callers.
std::vector<UpsetEvent> detect_sefi(std::vector<UpsetEvent> events, const MemoryGeometry& geometry,
                                    std::uint32_t threshold_bits = 16);

/// Relative frequency of normalised shapes. SEFI-classified events are
/// ignored; throws ValidationError if nothing remains to tally.
ShapeDistribution shape_histogram(const std::vector<UpsetEvent>& events);

} // namespace radrel
