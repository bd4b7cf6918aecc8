#include "radrel/readback.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace radrel {

void ReadbackCampaign::validate() const {
    geometry.validate();
    if (cycles.empty()) throw ValidationError("a readback campaign needs at least one cycle");
    if (fluence.n_per_cm2() <= 0) throw ValidationError("a readback campaign needs a positive fluence");
    if (golden.size() != geometry.total_bits || mask.size() != geometry.total_bits)
        throw ValidationError("golden/mask length does not match the memory geometry");
    for (const BitArray& c : cycles)
        if (c.size() != geometry.total_bits)
            throw ValidationError("readback cycle length does not match the memory geometry");
}

namespace {

void collect_positions(std::span<const std::uint64_t> readback, std::span<const std::uint64_t> golden,
                       std::span<const std::uint64_t> mask, std::size_t word_begin,
                       std::size_t word_end, std::vector<std::uint64_t>& out) {
    for (std::size_t w = word_begin; w < word_end; ++w) {
        std::uint64_t diff = (readback[w] ^ golden[w]) & mask[w];
        while (diff != 0) {
            const int b = std::countr_zero(diff);
            out.push_back(w * BitArray::kWordBits + std::uint64_t(b));
            diff &= diff - 1;
        }
        }
}

std::vector<std::uint64_t> masked_diff_positions(const BitArray& readback, const BitArray& golden,
                                                 const BitArray& mask, Exec exec) {
    if (readback.size() != golden.size() || readback.size() != mask.size())
        throw ValidationError("bit array length mismatch in readback diff");
    const std::size_t nw = readback.word_count();

    constexpr std::size_t kParallelWordThreshold = 1 << 14;
    if (exec == Exec::serial || nw < kParallelWordThreshold) {
        std::vector<std::uint64_t> out;
        collect_positions(readback.words(), golden.words(), mask.words(), 0, nw, out);
        return out;
    }

    int chunk_count = 1;
#ifdef _OPENMP
    chunk_count = std::max(1, omp_get_max_threads());
#endif
    std::vector<std::vector<std::uint64_t>> parts(static_cast<std::size_t>(chunk_count));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int c = 0; c < chunk_count; ++c) {
        const std::size_t begin = nw * std::size_t(c) / std::size_t(chunk_count);
        const std::size_t end = nw * std::size_t(c + 1) / std::size_t(chunk_count);
        collect_positions(readback.words(), golden.words(), mask.words(), begin, end,
                          parts[std::size_t(c)]);
    }
    // Chunks are concatenated in order, so the result is identical to the
    // serial pass.
    std::vector<std::uint64_t> out;
    std::size_t total = 0;
    for (const auto& p : parts) total += p.size();
    out.reserve(total);
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

std::vector<UpsetBit> positions_to_bits(const std::vector<std::uint64_t>& positions,
                                        const MemoryGeometry& g, std::uint32_t cycle) {
    std::vector<UpsetBit> bits;
    bits.reserve(positions.size());
    for (std::uint64_t p : positions)
        bits.push_back({cycle, std::uint32_t(p / g.bits_per_frame), std::uint32_t(p % g.bits_per_frame)});
    return bits;
}

} // namespace

std::vector<UpsetBit> diff_cycle(const ReadbackCampaign& campaign, std::uint32_t cycle_index,
                                 Exec exec) {
    campaign.validate();
    if (cycle_index >= campaign.cycles.size())
        throw ValidationError("cycle index out of range");
    return positions_to_bits(
        masked_diff_positions(campaign.cycles[cycle_index], campaign.golden, campaign.mask, exec),
        campaign.geometry, cycle_index);
}

CampaignAnalysis analyze_diff_sets(const std::vector<std::vector<UpsetBit>>& per_cycle_diffs,
                                   const MemoryGeometry& geometry, Fluence fluence,
                                   std::uint32_t config_period, const AnalysisOptions& options) {
    geometry.validate();
    if (fluence.n_per_cm2() <= 0) throw ValidationError("campaign analysis needs a positive fluence");

    CampaignAnalysis result;

    // Upsets persist across readbacks within one configuration period: a bit
    // first seen in cycle k stays in `seen` and is not counted again until a
    // reconfiguration resets the baseline.
    std::unordered_set<std::uint64_t> seen;
    for (std::uint32_t cycle = 0; cycle < per_cycle_diffs.size(); ++cycle) {
        if (config_period != 0 && cycle % config_period == 0) seen.clear();
        std::vector<UpsetBit> fresh;
        for (const UpsetBit& b : per_cycle_diffs[cycle]) {
            if (b.frame >= geometry.frame_count || b.bit >= geometry.bits_per_frame)
                throw ValidationError("upset bit outside the memory geometry");
            const std::uint64_t pos = std::uint64_t(b.frame) * geometry.bits_per_frame + b.bit;
            if (seen.insert(pos).second) fresh.push_back({cycle, b.frame, b.bit});
        }
        if (fresh.empty()) continue;
        auto events = detect_sefi(cluster_events(std::move(fresh), geometry), geometry,
                                  options.sefi_threshold_bits);
        for (UpsetEvent& e : events) {
            result.upset_bits += e.bits.size();
            switch (e.cls) {
                case UpsetClass::sbu: ++result.sbu_events; break;
                case UpsetClass::mbu: ++result.mbu_events; break;
                case UpsetClass::mcu: ++result.mcu_events; break;
                case UpsetClass::sefi:
                    ++result.sefi_events;
                    result.sefi_bits += e.bits.size();
                    break;
            }
            result.events.push_back(std::move(e));
        }
    }

    if (result.upset_bits > result.sefi_bits) result.shapes = shape_histogram(result.events);

    EstimateOptions device_opt{options.confidence, Basis::per_device, 0, options.fluence_uncertainty};
    EstimateOptions bit_opt{options.confidence, Basis::per_bit, geometry.total_bits,
                            options.fluence_uncertainty};
    result.sigma_device = estimate_cross_section(result.counted_bits(), fluence, device_opt);
    result.sigma_bit = estimate_cross_section(result.counted_bits(), fluence, bit_opt);
    return result;
}

CampaignAnalysis analyze_campaign(const ReadbackCampaign& campaign, const AnalysisOptions& options) {
    campaign.validate();
    std::vector<std::vector<UpsetBit>> diffs(campaign.cycles.size());
    const std::int64_t n = std::int64_t(campaign.cycles.size());
    // Per-cycle diffing is independent; word-level parallelism inside
    // diff_cycle is left off here to avoid nesting.
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (options.exec == Exec::parallel)
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        diffs[std::size_t(i)] = positions_to_bits(
            masked_diff_positions(campaign.cycles[std::size_t(i)], campaign.golden, campaign.mask,
                                  Exec::serial),
            campaign.geometry, std::uint32_t(i));
    }
    return analyze_diff_sets(diffs, campaign.geometry, campaign.fluence, campaign.config_period,
                             options);
}

std::pair<CrossSectionEstimate, CrossSectionEstimate>
static_cross_section(const ReadbackCampaign& campaign, const AnalysisOptions& options) {
    CampaignAnalysis a = analyze_campaign(campaign, options);
    return {a.sigma_device, a.sigma_bit};
}

// --- container I/O ----------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'R', 'B', 'K', 'C'};

class Cursor {
public:
    Cursor(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

    std::uint64_t offset() const { return offset_; }

    void need(std::size_t n, const char* what) const {
        if (offset_ + n > size_)
            throw InputFormatError(std::string("truncated readback container: expected ") + what,
                                   offset_);
    }
    template <typename T>
    T read_le(const char* what) {
        need(sizeof(T), what);
        T v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i)
            v |= T(std::uint64_t(data_[offset_ + i]) << (8 * i));
        offset_ += sizeof(T);
        return v;
    }
    double read_f64(const char* what) {
        const std::uint64_t raw = read_le<std::uint64_t>(what);
        double d;
        std::memcpy(&d, &raw, sizeof(d));
        return d;
    }
    std::span<const std::uint8_t> read_bytes(std::size_t n, const char* what) {
        need(n, what);
        std::span<const std::uint8_t> s(data_ + offset_, n);
        offset_ += n;
        return s;
    }

private:
    const std::uint8_t* data_;
    std::size_t size_;
    std::uint64_t offset_ = 0;
};

void append_le64(std::vector<std::uint8_t>& out, std::uint64_t v, std::size_t bytes) {
    for (std::size_t i = 0; i < bytes; ++i) out.push_back(std::uint8_t((v >> (8 * i)) & 0xFF));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputFormatError("cannot open file: " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

} // namespace

ReadbackCampaign load_rbkc(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = read_file(path);
    Cursor cur(bytes.data(), bytes.size());

    cur.need(4, "magic");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw InputFormatError("bad magic, not a readback container", 0);
    cur.read_bytes(4, "magic");

    const auto version = cur.read_le<std::uint16_t>("version");
    if (version != kRbkcVersion)
        throw InputFormatError("unsupported container version " + std::to_string(version), 4);

    ReadbackCampaign c;
    c.geometry.name = path.stem().string();
    c.geometry.frame_count = cur.read_le<std::uint32_t>("frame_count");
    c.geometry.bits_per_frame = cur.read_le<std::uint32_t>("bits_per_frame");
    const auto cycle_count = cur.read_le<std::uint32_t>("cycle_count");
    c.config_period = cur.read_le<std::uint32_t>("config_period");
    const double fluence = cur.read_f64("fluence");
    if (!(fluence > 0)) throw InputFormatError("container fluence must be positive", cur.offset() - 8);
    c.fluence = Fluence(fluence);
    c.geometry.total_bits = std::uint64_t(c.geometry.frame_count) * c.geometry.bits_per_frame;
    if (c.geometry.frame_count == 0 || c.geometry.bits_per_frame == 0)
        throw InputFormatError("container declares an empty geometry", 6);
    if (cycle_count == 0) throw InputFormatError("container holds no readback cycles", 14);

    const std::size_t array_bytes = std::size_t((c.geometry.total_bits + 7) / 8);
    c.golden = BitArray::from_bytes(cur.read_bytes(array_bytes, "golden image"), c.geometry.total_bits);
    c.mask = BitArray::from_bytes(cur.read_bytes(array_bytes, "mask image"), c.geometry.total_bits);
    c.cycles.reserve(cycle_count);
    for (std::uint32_t i = 0; i < cycle_count; ++i)
        c.cycles.push_back(
            BitArray::from_bytes(cur.read_bytes(array_bytes, "readback cycle"), c.geometry.total_bits));
    if (cur.offset() != bytes.size())
        throw InputFormatError("trailing bytes after the last readback cycle", cur.offset());
    return c;
}

void save_rbkc(const ReadbackCampaign& campaign, const std::filesystem::path& path) {
    campaign.validate();
    std::vector<std::uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    append_le64(out, kRbkcVersion, 2);
    append_le64(out, campaign.geometry.frame_count, 4);
    append_le64(out, campaign.geometry.bits_per_frame, 4);
    append_le64(out, campaign.cycles.size(), 4);
    append_le64(out, campaign.config_period, 4);
    std::uint64_t fluence_raw;
    const double fluence = campaign.fluence.n_per_cm2();
    std::memcpy(&fluence_raw, &fluence, sizeof(fluence_raw));
    append_le64(out, fluence_raw, 8);

    auto append_bits = [&](const BitArray& a) {
        const std::vector<std::uint8_t> b = a.to_bytes();
        out.insert(out.end(), b.begin(), b.end());
    };
    append_bits(campaign.golden);
    append_bits(campaign.mask);
    for (const BitArray& c : campaign.cycles) append_bits(c);

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("cannot write file: " + path.string());
    f.write(reinterpret_cast<const char*>(out.data()), std::streamsize(out.size()));
}

std::vector<std::vector<UpsetBit>> load_diff_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputFormatError("cannot open file: " + path.string());

    std::string line;
    std::uint64_t offset = 0;
    if (!std::getline(in, line)) throw InputFormatError("empty diff CSV", 0);
    {
        std::string header = line;
        header.erase(std::remove_if(header.begin(), header.end(),
                                    [](char ch) { return ch == ' ' || ch == '\r'; }),
                     header.end());
        if (header != "cycle,frame,bit")
            throw InputFormatError("diff CSV must start with header 'cycle,frame,bit'", 0);
    }
    offset += line.size() + 1;

    std::vector<std::vector<UpsetBit>> per_cycle;
    while (std::getline(in, line)) {
        const std::uint64_t line_offset = offset;
        offset += line.size() + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::uint32_t values[3];
        for (int i = 0; i < 3; ++i) {
            if (!std::getline(row, field, ',') || field.empty())
                throw InputFormatError("diff CSV row needs 3 fields 'cycle,frame,bit'", line_offset);
            try {
                const unsigned long v = std::stoul(field);
                if (v > std::numeric_limits<std::uint32_t>::max()) throw std::out_of_range("");
                values[i] = std::uint32_t(v);
            } catch (const std::exception&) {
                throw InputFormatError("diff CSV field is not an unsigned integer: " + field,
                                       line_offset);
            }
        }
        if (std::getline(row, field, ','))
            throw InputFormatError("diff CSV row has extra fields", line_offset);
        if (values[0] > (1u << 20))
            throw InputFormatError("diff CSV cycle index is implausibly large", line_offset);
        if (values[0] >= per_cycle.size()) per_cycle.resize(values[0] + 1);
        per_cycle[values[0]].push_back({values[0], values[1], values[2]});
    }
    if (per_cycle.empty()) throw InputFormatError("diff CSV holds no rows", offset);
    return per_cycle;
}

} // namespace radrel
