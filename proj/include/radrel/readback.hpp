#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "radrel/bitarray.hpp"
#include "radrel/geometry.hpp"
#include "radrel/stats.hpp"
#include "radrel/units.hpp"

namespace radrel {

/// Execution policy for the data-parallel kernels. The serial path is the
/// reference implementation; the parallel one must produce identical output.
enum class Exec { serial, parallel };

/// A readback campaign: golden expectation, compare mask (1 = compare,
/// 0 = dynamic bit, ignored) and the captured readback cycles. The golden
/// image is constant across cycles (static test patterns, clocks disabled).
struct ReadbackCampaign {
    MemoryGeometry geometry;
    BitArray golden;
    BitArray mask;
    std::vector<BitArray> cycles;
    Fluence fluence{0};
    // Readbacks per reconfiguration; accumulated upsets persist within one
    // configuration period and the baseline resets at its boundary.
    // 0 = never reconfigured during the campaign.
    std::uint32_t config_period = 0;

    void validate() const;
};

/// Bit positions where (readback XOR golden) AND mask = 1, as (frame, bit).
std::vector<UpsetBit> diff_cycle(const ReadbackCampaign& campaign, std::uint32_t cycle_index,
                                 Exec exec = Exec::parallel);

struct AnalysisOptions {
    std::uint32_t sefi_threshold_bits = 16;
    double confidence = 0.95;
    bool fluence_uncertainty = false;
    Exec exec = Exec::parallel;
};

struct CampaignAnalysis {
    std::vector<UpsetEvent> events; // SEFIs included, classified
    std::uint64_t upset_bits = 0;   // newly observed upset bits over the campaign
    std::uint64_t sefi_bits = 0;
    std::uint64_t sefi_events = 0;
    std::uint64_t sbu_events = 0;
    std::uint64_t mbu_events = 0;
    std::uint64_t mcu_events = 0;
    ShapeDistribution shapes; // SEFIs excluded; empty when no NSEU events
    CrossSectionEstimate sigma_device;
    CrossSectionEstimate sigma_bit;

    std::uint64_t counted_bits() const { return upset_bits - sefi_bits; }
};

/// Full post-analysis: per-cycle diff, accumulation handling, clustering,
/// SEFI screening, shape histogram and cross-sections (SEFI bits excluded).
CampaignAnalysis analyze_campaign(const ReadbackCampaign& campaign,
                                  const AnalysisOptions& options = {});

/// Same pipeline on pre-diffed bits (one raw diff set per cycle).
CampaignAnalysis analyze_diff_sets(const std::vector<std::vector<UpsetBit>>& per_cycle_diffs,
                                   const MemoryGeometry& geometry, Fluence fluence,
                                   std::uint32_t config_period,
                                   const AnalysisOptions& options = {});

/// Cross-section of a campaign (device and per-bit basis), SEFI bits excluded.
std::pair<CrossSectionEstimate, CrossSectionEstimate>
static_cross_section(const ReadbackCampaign& campaign, const AnalysisOptions& options = {});

// --- container I/O ----------------------------------------------------------
//
// Binary container, little-endian:
//   magic "RBKC", version u16, frame_count u32, bits_per_frame u32,
//   cycle_count u32, config_period u32, fluence f64,
//   then golden, mask and each cycle as packed bit arrays (LSB-first bit
//   order, padded to a byte boundary).

inline constexpr std::uint16_t kRbkcVersion = 1;

ReadbackCampaign load_rbkc(const std::filesystem::path& path);
void save_rbkc(const ReadbackCampaign& campaign, const std::filesystem::path& path);

/// Pre-diffed upset list: CSV with header `cycle,frame,bit`.
std::vector<std::vector<UpsetBit>> load_diff_csv(const std::filesystem::path& path);

} // namespace radrel
