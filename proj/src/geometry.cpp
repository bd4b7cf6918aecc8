#include "radrel/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

namespace radrel {

std::string to_string(MemoryKind kind) {
    switch (kind) {
        case MemoryKind::cram: return "cram";
        case MemoryKind::bram: return "bram";
        case MemoryKind::srl: return "srl";
        case MemoryKind::cache_array: return "cache-array";
    }
    return "?";
}

MemoryKind memory_kind_from_string(const std::string& s) {
    if (s == "cram") return MemoryKind::cram;
    if (s == "bram") return MemoryKind::bram;
    if (s == "srl") return MemoryKind::srl;
    if (s == "cache-array" || s == "cache_array") return MemoryKind::cache_array;
    throw ValidationError("unknown memory kind: " + s);
}

std::string to_string(UpsetClass cls) {
    switch (cls) {
        case UpsetClass::sbu: return "SBU";
        case UpsetClass::mbu: return "MBU";
        case UpsetClass::mcu: return "MCU";
        case UpsetClass::sefi: return "SEFI";
    }
    return "?";
}

void MemoryGeometry::validate() const {
    if (frame_count == 0 || bits_per_frame == 0)
        throw ValidationError("memory geometry '" + name + "' needs positive frame dimensions");
    if (total_bits != std::uint64_t(frame_count) * bits_per_frame)
        throw ValidationError("memory geometry '" + name +
                              "': total_bits must equal frame_count * bits_per_frame");
    if (block_bits > total_bits)
        throw ValidationError("memory geometry '" + name + "': block_bits exceeds total_bits");
}

ShapeSignature ShapeSignature::from_bits(const std::vector<UpsetBit>& bits) {
    if (bits.empty()) throw ValidationError("shape of an empty bit set is undefined");
    std::uint32_t min_f = bits.front().frame, min_b = bits.front().bit;
    for (const UpsetBit& b : bits) {
        min_f = std::min(min_f, b.frame);
        min_b = std::min(min_b, b.bit);
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> offsets;
    offsets.reserve(bits.size());
    for (const UpsetBit& b : bits) offsets.emplace_back(b.frame - min_f, b.bit - min_b);
    return from_offsets(std::move(offsets));
}

ShapeSignature ShapeSignature::from_offsets(
    std::vector<std::pair<std::uint32_t, std::uint32_t>> offsets) {
    if (offsets.empty()) throw ValidationError("a shape needs at least one offset");
    std::sort(offsets.begin(), offsets.end());
    offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
    std::uint32_t min_f = offsets.front().first, min_b = offsets.front().second;
    std::uint32_t max_f = 0, max_b = 0;
    for (auto& [f, b] : offsets) {
        min_f = std::min(min_f, f);
        min_b = std::min(min_b, b);
        max_f = std::max(max_f, f);
        max_b = std::max(max_b, b);
    }
    if (min_f != 0 || min_b != 0) {
        for (auto& [f, b] : offsets) {
            f -= min_f;
            b -= min_b;
        }
        max_f -= min_f;
        max_b -= min_b;
    }
    ShapeSignature s;
    s.offsets = std::move(offsets);
    s.frame_extent = max_f + 1;
    s.bit_extent = max_b + 1;
    return s;
}

std::string ShapeSignature::key() const {
    std::string k;
    for (const auto& [f, b] : offsets) {
        if (!k.empty()) k += ';';
        k += std::to_string(f) + ',' + std::to_string(b);
    }
    return k;
}

void ShapeDistribution::validate() const {
    double sum = 0;
    for (const Entry& e : entries) {
        if (e.probability < 0) throw ValidationError("shape probabilities must be non-negative");
        sum += e.probability;
    }
    if (!entries.empty() && std::fabs(sum - 1.0) > 1e-9)
        throw ValidationError("shape probabilities must sum to 1");
}

ShapeDistribution ShapeDistribution::from_raw_percentages(std::vector<Entry> entries) {
    double total = 0;
    for (const Entry& e : entries) {
        if (e.raw_percent < 0) throw ValidationError("shape percentages must be non-negative");
        total += e.raw_percent;
    }
    if (total <= 0) throw ValidationError("shape percentages must not all be zero");
    for (Entry& e : entries) e.probability = e.raw_percent / total;
    ShapeDistribution d;
    d.entries = std::move(entries);
    d.validate();
    return d;
}

ShapeDistribution ShapeDistribution::single_bit_only() {
    ShapeDistribution d;
    d.entries.push_back({ShapeSignature::from_offsets({{0, 0}}), 1.0, 100.0, "1x1"});
    return d;
}

namespace {

struct DisjointSet {
    explicit DisjointSet(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::size_t(0));
    }
    std::size_t find(std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<std::size_t> parent;
};

UpsetClass classify(const std::vector<UpsetBit>& bits) {
    if (bits.size() == 1) return UpsetClass::sbu;
    const std::uint32_t frame = bits.front().frame;
    const bool one_frame =
        std::all_of(bits.begin(), bits.end(), [&](const UpsetBit& b) { return b.frame == frame; });
    return one_frame ? UpsetClass::mbu : UpsetClass::mcu;
}

} // namespace

std::vector<UpsetEvent> cluster_events(std::vector<UpsetBit> bits, const MemoryGeometry& geometry) {
    geometry.validate();
    for (const UpsetBit& b : bits) {
        if (b.frame >= geometry.frame_count || b.bit >= geometry.bits_per_frame)
            throw ValidationError("upset bit outside the memory geometry");
        if (b.cycle != bits.front().cycle)
            throw ValidationError("clustering input must come from a single readback cycle");
    }

    std::sort(bits.begin(), bits.end());
    bits.erase(std::unique(bits.begin(), bits.end()), bits.end());
    if (bits.empty()) return {};

    std::unordered_map<std::uint64_t, std::size_t> index;
    index.reserve(bits.size() * 2);
    auto linear = [&](std::uint64_t frame, std::uint64_t bit) {
        return frame * geometry.bits_per_frame + bit;
    };
    for (std::size_t i = 0; i < bits.size(); ++i) index.emplace(linear(bits[i].frame, bits[i].bit), i);

    DisjointSet ds(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        const UpsetBit& b = bits[i];
        for (int df = -1; df <= 1; ++df) {
            for (int db = -1; db <= 1; ++db) {
                if (df == 0 && db == 0) continue;
                const std::int64_t nf = std::int64_t(b.frame) + df;
                const std::int64_t nb = std::int64_t(b.bit) + db;
                if (nf < 0 || nb < 0 || nf >= std::int64_t(geometry.frame_count) ||
                    nb >= std::int64_t(geometry.bits_per_frame))
                    continue;
                auto it = index.find(linear(std::uint64_t(nf), std::uint64_t(nb)));
                if (it != index.end()) ds.unite(i, it->second);
            }
        }
    }

    std::map<std::size_t, std::vector<UpsetBit>> components;
    for (std::size_t i = 0; i < bits.size(); ++i) components[ds.find(i)].push_back(bits[i]);

    std::vector<UpsetEvent> events;
    events.reserve(components.size());
    for (auto& [root, member_bits] : components) {
        UpsetEvent e;
        e.bits = std::move(member_bits); // already sorted (insertion in sorted order)
        e.cls = classify(e.bits);
        e.shape = ShapeSignature::from_bits(e.bits);
        events.push_back(std::move(e));
    }
    return events;
}

std::vector<UpsetEvent> detect_sefi(std::vector<UpsetEvent> events, const MemoryGeometry& geometry,
                                    std::uint32_t threshold_bits) {
    geometry.validate();
    const std::uint64_t block = geometry.block_bits == 0 ? geometry.total_bits : geometry.block_bits;
    for (UpsetEvent& e : events) {
        std::map<std::uint64_t, std::uint32_t> per_block;
        for (const UpsetBit& b : e.bits) {
            const std::uint64_t pos = std::uint64_t(b.frame) * geometry.bits_per_frame + b.bit;
            ++per_block[pos / block];
        }
        const bool burst = std::any_of(per_block.begin(), per_block.end(),
                                       [&](const auto& kv) { return kv.second > threshold_bits; });
        if (burst) e.cls = UpsetClass::sefi;
    }
    return events;
}

ShapeDistribution shape_histogram(const std::vector<UpsetEvent>& events) {
    std::map<ShapeSignature, std::uint64_t> tally;
    std::uint64_t total = 0;
    for (const UpsetEvent& e : events) {
        if (e.cls == UpsetClass::sefi) continue;
        ++tally[e.shape];
        ++total;
    }
    if (total == 0) throw ValidationError("shape histogram of an empty event list");

    ShapeDistribution d;
    for (const auto& [shape, count] : tally) {
        ShapeDistribution::Entry entry;
        entry.shape = shape;
        entry.probability = double(count) / double(total);
        entry.raw_percent = 100.0 * entry.probability;
        entry.label = std::to_string(shape.frame_extent) + "x" + std::to_string(shape.bit_extent);
        d.entries.push_back(std::move(entry));
    }
    // Most frequent first; key order breaks ties deterministically.
    std::stable_sort(d.entries.begin(), d.entries.end(),
                     [](const auto& a, const auto& b) { return a.probability > b.probability; });
    return d;
}

} // namespace radrel
