#include "radrel/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace radrel {

std::vector<double> sample_arrivals(double rate_per_hour, double horizon_hours, Rng& rng) {
    if (rate_per_hour < 0) throw ValidationError("arrival rate must be non-negative");
    if (horizon_hours < 0) throw ValidationError("horizon must be non-negative");
    std::vector<double> times;
    if (rate_per_hour == 0) return times;
    double t = rng.exponential(rate_per_hour);
    while (t < horizon_hours) {
        times.push_back(t);
        t += rng.exponential(rate_per_hour);
    }
    return times;
}

ShapeSignature sample_shape(const ShapeDistribution& distribution, Rng& rng) {
    distribution.validate();
    if (distribution.entries.empty()) throw ValidationError("cannot sample an empty distribution");
    const double u = rng.uniform();
    double acc = 0;
    for (const auto& e : distribution.entries) {
        acc += e.probability;
        if (u < acc) return e.shape;
    }
    return distribution.entries.back().shape;
}

std::vector<UpsetBit> place_upset(const ShapeSignature& shape, const MemoryGeometry& geometry,
                                  Rng& rng) {
    geometry.validate();
    if (shape.frame_extent > geometry.frame_count || shape.bit_extent > geometry.bits_per_frame)
        throw ValidationError("shape does not fit in the memory geometry");
    // Anchor drawn from the admissible range, so placement is always in
    // bounds. Two draws regardless of shape, keeping streams aligned.
    const auto anchor_frame =
        std::uint32_t(rng.index_below(geometry.frame_count - shape.frame_extent + 1));
    const auto anchor_bit =
        std::uint32_t(rng.index_below(geometry.bits_per_frame - shape.bit_extent + 1));
    std::vector<UpsetBit> bits;
    bits.reserve(shape.offsets.size());
    for (const auto& [df, db] : shape.offsets)
        bits.push_back({0, anchor_frame + df, anchor_bit + db});
    return bits;
}

std::string to_string(CachePolicy p) {
    switch (p) {
        case CachePolicy::none: return "none";
        case CachePolicy::parity_detect_invalidate: return "parity-detect-invalidate";
        case CachePolicy::secded_correct: return "secded-correct";
    }
    return "?";
}

CachePolicy cache_policy_from_string(const std::string& s) {
    if (s == "none") return CachePolicy::none;
    if (s == "parity-detect-invalidate" || s == "parity") return CachePolicy::parity_detect_invalidate;
    if (s == "secded-correct" || s == "secded") return CachePolicy::secded_correct;
    throw ValidationError("unknown cache policy: " + s);
}

void MitigationConfig::validate() const {
    if (scrub_rate_per_min < 0) throw ValidationError("scrub rate must be non-negative");
    if (dirty_line_fraction < 0 || dirty_line_fraction > 1)
        throw ValidationError("dirty line fraction must be in [0, 1]");
}

void ScrubRaceConfig::validate() const {
    if (arrival_rate_per_min < 0 || scrub_rate_per_min < 0)
        throw ValidationError("rates must be non-negative");
    if (horizon_minutes <= 0) throw ValidationError("horizon must be positive");
    if (trials == 0) throw ValidationError("at least one trial is required");
    if (device_frames == 0) throw ValidationError("device frame count must be positive");
    if (frame_scan_rate_per_min <= 0) throw ValidationError("frame scan rate must be positive");
    if (series_points == 0) throw ValidationError("series needs at least one point");
}

double combined_upset_rate_per_hour(const std::vector<SimArray>& arrays, const Environment& env,
                                    const Deployment& dep) {
    double rate = 0;
    for (const SimArray& a : arrays)
        rate += ((a.sigma_bit_cm2 * double(a.geometry.total_bits)) * env.resolved_flux()) *
                double(dep.n_devices);
    return rate;
}

namespace {

// Re-map bits sharing a frame onto consecutive distinct frames (same bit
// offsets). Models layout interleaving: logically adjacent cells are
// physically separated, so one event never hits a frame twice.
std::vector<UpsetBit> spread_frames(std::vector<UpsetBit> bits, const MemoryGeometry& geometry) {
    bool collision = false;
    for (std::size_t i = 1; i < bits.size() && !collision; ++i)
        for (std::size_t j = 0; j < i && !collision; ++j)
            if (bits[i].frame == bits[j].frame) collision = true;
    if (!collision || bits.size() > geometry.frame_count) return bits;

    std::sort(bits.begin(), bits.end());
    std::uint32_t anchor = bits.front().frame;
    if (std::uint64_t(anchor) + bits.size() > geometry.frame_count)
        anchor = std::uint32_t(geometry.frame_count - bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i].frame = anchor + std::uint32_t(i);
    return bits;
}

bool has_same_frame_pair(const std::vector<UpsetBit>& bits) {
    for (std::size_t i = 1; i < bits.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (bits[i].frame == bits[j].frame) return true;
    return false;
}

// Decides whether one arrival defeats the configured mitigation. Draw order
// (shape, anchor x2, dirty) is fixed so that the same seed produces the same
// upset sequence under every mitigation configuration.
bool arrival_fails(const SimArray& array, const MitigationConfig& m, Rng& rng) {
    const ShapeSignature shape = sample_shape(array.shapes, rng);
    std::vector<UpsetBit> bits = place_upset(shape, array.geometry, rng);
    const bool dirty = rng.uniform() < m.dirty_line_fraction;
    if (m.interleaving) bits = spread_frames(std::move(bits), array.geometry);
    const bool beats_frame_ecc = has_same_frame_pair(bits);

    if (array.geometry.kind == MemoryKind::cache_array) {
        auto it = m.cache_policy.find(array.name);
        const CachePolicy policy = it == m.cache_policy.end() ? CachePolicy::none : it->second;
        switch (policy) {
            case CachePolicy::none:
                return true;
            case CachePolicy::parity_detect_invalidate:
                // Single-bit: detected, line invalidated and refetched —
                // lost only if the line was dirty. Multi-bit in one word
                // escapes parity entirely.
                return beats_frame_ecc || dirty;
            case CachePolicy::secded_correct:
                // Single-bit corrected; double-bit detected and recovered by
                // invalidation unless the line was dirty.
                return beats_frame_ecc && dirty;
        }
        return true;
    }
    // Frame-organised PL memory: per-frame SECDED corrects one upset per
    // frame during scrubbing.
    return m.frame_ecc ? beats_frame_ecc : true;
}

struct TrialOutcome {
    double first_failure_hours = -1; // <0 = censored
    std::int32_t failing_array = -1;
};

TrialOutcome run_failure_trial(const std::vector<SimArray>& arrays,
                               const std::vector<double>& rates_per_hour,
                               const FailureCampaignConfig& cfg, double horizon, Rng rng) {
    TrialOutcome out;
    double best = horizon;
    // Arrays are processed in fixed order and every arrival consumes a fixed
    // number of draws, so the outcome is independent of scheduling.
    for (std::size_t ai = 0; ai < arrays.size(); ++ai) {
        const std::vector<double> arrivals = sample_arrivals(rates_per_hour[ai], horizon, rng);
        for (double t : arrivals) {
            const bool fails = arrival_fails(arrays[ai], cfg.mitigation, rng);
            if (fails && t < best) {
                best = t;
                out.failing_array = std::int32_t(ai);
            }
        }
    }
    if (out.failing_array >= 0) out.first_failure_hours = best;
    return out;
}

} // namespace

SimResult run_failure_campaign(const std::vector<SimArray>& arrays,
                               const FailureCampaignConfig& config) {
    if (arrays.empty()) throw ValidationError("failure campaign needs at least one memory array");
    if (config.trials == 0) throw ValidationError("at least one trial is required");
    config.mitigation.validate();
    for (const SimArray& a : arrays) {
        a.geometry.validate();
        a.shapes.validate();
        if (a.sigma_bit_cm2 < 0) throw ValidationError("per-bit cross-section must be non-negative");
    }

    std::vector<double> rates(arrays.size());
    double total_rate = 0;
    for (std::size_t i = 0; i < arrays.size(); ++i) {
        rates[i] = ((arrays[i].sigma_bit_cm2 * double(arrays[i].geometry.total_bits)) *
                    config.environment.resolved_flux()) *
                   double(config.deployment.n_devices);
        total_rate += rates[i];
    }
    if (total_rate <= 0) throw ValidationError("all arrays have zero upset rate");

    const double horizon =
        config.horizon_hours > 0 ? config.horizon_hours : 20.0 / total_rate;

    std::vector<TrialOutcome> outcomes(config.trials);
    const std::int64_t n = config.trials;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (config.exec == Exec::parallel)
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        outcomes[std::size_t(i)] =
            run_failure_trial(arrays, rates, config, horizon,
                              Rng(Rng::derive_stream(config.seed, std::uint64_t(i))));
    }

    SimResult result;
    result.trials = config.trials;
    result.seed = config.seed;
    result.horizon = horizon;
    double total_time = 0;
    for (const TrialOutcome& o : outcomes) {
        if (o.failing_array >= 0) {
            result.time_to_first_failure_hours.push_back(o.first_failure_hours);
            total_time += o.first_failure_hours;
            ++result.failure_counts[arrays[std::size_t(o.failing_array)].name];
        } else {
            ++result.censored;
            total_time += horizon;
        }
    }
    const std::uint64_t failures = result.time_to_first_failure_hours.size();
    if (failures > 0) {
        // Exponential MLE (total time on test / failures) handles censored
        // trials without bias.
        const double mean = total_time / double(failures);
        result.mean_time = MeanTimeTo{mean, MeanTimeTo::Kind::failure};
        result.standard_error_hours = mean / std::sqrt(double(failures));
    }
    return result;
}

namespace {

struct RaceTrial {
    std::vector<double> backlog_at_grid; // series_points samples
    double steady_state = 0;
};

RaceTrial run_race_trial(const ScrubRaceConfig& cfg, Rng rng) {
    const double horizon = cfg.horizon_minutes;
    std::vector<double> arrivals;
    {
        // sample_arrivals works in generic time units; minutes here.
        if (cfg.arrival_rate_per_min > 0) {
            double t = rng.exponential(cfg.arrival_rate_per_min);
            while (t < horizon) {
                arrivals.push_back(t);
                t += rng.exponential(cfg.arrival_rate_per_min);
            }
        }
    }

    const double frames = double(cfg.device_frames);
    std::vector<double> corrections(arrivals.size(),
                                    std::numeric_limits<double>::infinity());
    if (cfg.scrub_rate_per_min > 0) {
        const double service = 1.0 / cfg.scrub_rate_per_min;
        double server_free = 0;
        for (std::size_t i = 0; i < arrivals.size(); ++i) {
            const double t = arrivals[i];
            const double frame = double(rng.index_below(cfg.device_frames));
            // The cyclic scanner reaches this frame after the remaining
            // fraction of the current sweep.
            const double position = std::fmod(cfg.frame_scan_rate_per_min * t, frames);
            double ahead = frame - position;
            if (ahead < 0) ahead += frames;
            const double detected = t + ahead / cfg.frame_scan_rate_per_min;
            const double start = std::max(detected, server_free);
            corrections[i] = start + service;
            server_free = corrections[i];
        }
    } else {
        // Keep the frame draws so the arrival stream matches the scrubbed
        // configurations under the same seed.
        for (std::size_t i = 0; i < arrivals.size(); ++i) rng.index_below(cfg.device_frames);
    }

    // Backlog B(t) = arrivals not yet corrected. Sweep +1/-1 events.
    std::vector<std::pair<double, int>> deltas;
    deltas.reserve(arrivals.size() * 2);
    for (double t : arrivals) deltas.emplace_back(t, +1);
    for (double t : corrections)
        if (t < std::numeric_limits<double>::infinity()) deltas.emplace_back(t, -1);
    std::sort(deltas.begin(), deltas.end());

    RaceTrial out;
    out.backlog_at_grid.resize(cfg.series_points, 0);
    const double warmup = 0.2 * horizon;
    double integral = 0;
    double level = 0;
    double prev = warmup;
    std::size_t grid = 0;
    auto grid_time = [&](std::size_t g) { return horizon * double(g + 1) / double(cfg.series_points); };

    for (const auto& [t, delta] : deltas) {
        if (t >= horizon) break;
        while (grid < cfg.series_points && grid_time(grid) <= t) {
            out.backlog_at_grid[grid] = level;
            ++grid;
        }
        if (t > warmup) {
            integral += level * (t - std::max(prev, warmup));
            prev = t;
        }
        level += delta;
    }
    while (grid < cfg.series_points) {
        out.backlog_at_grid[grid] = level;
        ++grid;
    }
    integral += level * (horizon - std::max(prev, warmup));
    out.steady_state = integral / (horizon - warmup);
    return out;
}

} // namespace

SimResult run_scrub_race(const ScrubRaceConfig& config) {
    config.validate();

    std::vector<RaceTrial> trials(config.trials);
    const std::int64_t n = config.trials;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (config.exec == Exec::parallel)
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        trials[std::size_t(i)] =
            run_race_trial(config, Rng(Rng::derive_stream(config.seed, std::uint64_t(i))));
    }

    SimResult result;
    result.trials = config.trials;
    result.seed = config.seed;
    result.horizon = config.horizon_minutes;
    result.uncorrected_accumulation.resize(config.series_points);
    for (std::uint32_t g = 0; g < config.series_points; ++g) {
        double sum = 0;
        for (const RaceTrial& t : trials) sum += t.backlog_at_grid[g];
        result.uncorrected_accumulation[g] = {
            config.horizon_minutes * double(g + 1) / double(config.series_points),
            sum / double(config.trials)};
    }
    double steady = 0;
    for (const RaceTrial& t : trials) steady += t.steady_state;
    result.steady_state_backlog = steady / double(config.trials);
    return result;
}

} // namespace radrel
