#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "radrel/geometry.hpp"
#include "radrel/projection.hpp"
#include "radrel/readback.hpp"
#include "radrel/rng.hpp"
#include "radrel/units.hpp"

namespace radrel {

/// Ordered event times of a homogeneous Poisson process over [0, horizon).
std::vector<double> sample_arrivals(double rate_per_hour, double horizon_hours, Rng& rng);

ShapeSignature sample_shape(const ShapeDistribution& distribution, Rng& rng);

/// Place a shape at a uniformly random anchor such that it fits inside the
/// grid. Throws ValidationError if the shape cannot fit.
std::vector<UpsetBit> place_upset(const ShapeSignature& shape, const MemoryGeometry& geometry,
                                  Rng& rng);

enum class CachePolicy { none, parity_detect_invalidate, secded_correct };

std::string to_string(CachePolicy p);
CachePolicy cache_policy_from_string(const std::string& s);

struct MitigationConfig {
    double scrub_rate_per_min = 0; // 0 = scrubbing disabled
    // Per-frame SECDED on frame-organised arrays: corrects one upset per
    // frame, beaten by same-frame multiplicity >= 2.
    bool frame_ecc = false;
    // Layout interleaving: sampled shapes never place two bits in one frame.
    bool interleaving = false;
    std::map<std::string, CachePolicy> cache_policy; // array name -> policy
    // Probability that a struck cache line is dirty (loss on an
    // uncorrectable upset). Unmeasured; swept rather than asserted.
    double dirty_line_fraction = 0.5;

    void validate() const;
};

/// Memory array as seen by the simulator; the upset arrival rate is
/// sigma_bit * flux * bit_count (* n_devices).
struct SimArray {
    std::string name;
    MemoryGeometry geometry;
    double sigma_bit_cm2 = 0;
    ShapeDistribution shapes; // defaults to single-bit-only
};

struct SimResult {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    double horizon = 0; // hours (failure campaign) or minutes (scrub race)

    // Failure campaign outputs.
    std::vector<double> time_to_first_failure_hours; // observed failures, trial order
    std::uint64_t censored = 0;                      // trials with no failure in horizon
    std::optional<MeanTimeTo> mean_time;             // total time on test / failures
    double standard_error_hours = 0;                 // mean / sqrt(failures)
    std::map<std::string, std::uint64_t> failure_counts; // first-failure attribution

    // Scrub race outputs.
    std::vector<std::pair<double, double>> uncorrected_accumulation; // (minute, mean backlog)
    double steady_state_backlog = 0; // time-averaged backlog after warmup
};

struct FailureCampaignConfig {
    Environment environment = Environment::nyc_sea_level();
    Deployment deployment;
    MitigationConfig mitigation;
    std::uint32_t trials = 10000;
    double horizon_hours = 0; // 0 = auto (20x the unmitigated analytic MTTU)
    std::uint64_t seed = 1;
    Exec exec = Exec::parallel;
};

/// Monte Carlo time-to-first-failure campaign. Per trial, upsets arrive per
/// array as independent Poisson processes; an arrival becomes a failure iff
/// the configured mitigation fails (same-frame multiplicity beating frame
/// SECDED, a parity array hit on a dirty line, a SECDED array double-bit on
/// a dirty line). Identical seed and config give a bit-identical result in
/// both execution modes.
SimResult run_failure_campaign(const std::vector<SimArray>& arrays,
                               const FailureCampaignConfig& config);

struct ScrubRaceConfig {
    double arrival_rate_per_min = 8;
    double scrub_rate_per_min = 1700; // corrections per minute; 0 = no scrubbing
    double horizon_minutes = 240;
    std::uint32_t trials = 32;
    std::uint64_t seed = 1;
    std::uint32_t device_frames = 36781;
    double frame_scan_rate_per_min = 2.2e6; // full scan ~= 1 s at the default frame count
    std::uint32_t series_points = 120;
    Exec exec = Exec::parallel;

    void validate() const;
};

/// Race between upset arrivals and the scrubber. An upset lands in a random
/// frame, is detected when the cyclic frame scanner next crosses it, and is
/// then corrected by a single server at scrub_rate (deterministic service
/// time). Reports the mean uncorrected backlog over time and its
/// steady-state average (first 20% of the horizon discarded as warmup).
SimResult run_scrub_race(const ScrubRaceConfig& config);

/// Unmitigated analytic upset rate of a set of arrays, per hour.
double combined_upset_rate_per_hour(const std::vector<SimArray>& arrays, const Environment& env,
                                    const Deployment& dep);

} // namespace radrel
