#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "radrel/sim.hpp"

using namespace radrel;

namespace {

ShapeDistribution table_shapes() {
    // The bundled CRAM shape mix: an SBU plus multi-frame MCU chains, none
    // of which places two bits in one frame.
    std::vector<ShapeDistribution::Entry> entries;
    auto add = [&](std::vector<std::pair<std::uint32_t, std::uint32_t>> offsets, double percent,
                   std::string label) {
        ShapeDistribution::Entry e;
        e.shape = ShapeSignature::from_offsets(std::move(offsets));
        e.raw_percent = percent;
        e.label = std::move(label);
        entries.push_back(std::move(e));
    };
    add({{0, 0}}, 93.80, "sbu");
    add({{0, 0}, {1, 0}}, 4.07, "mcu2");
    add({{0, 0}, {1, 0}, {2, 1}, {3, 1}, {4, 1}}, 0.84, "mcu5");
    add({{0, 0}, {1, 0}, {2, 1}, {3, 1}, {4, 1}, {5, 2}, {6, 2}, {7, 2}}, 0.57, "mcu8");
    add({{0, 0}, {1, 1}, {2, 1}}, 0.35, "mcu3");
    add({{0, 0}, {1, 1}}, 0.09, "mcu2d");
    return ShapeDistribution::from_raw_percentages(std::move(entries));
}

MemoryGeometry grid(std::uint32_t frames, std::uint32_t bits, std::uint64_t block = 0) {
    return {"sim", MemoryKind::cram, frames, bits, std::uint64_t(frames) * bits, block};
}

SimArray simple_array(const std::string& name, double sigma_bit, std::uint64_t bits,
                      MemoryKind kind = MemoryKind::cram) {
    SimArray a;
    a.name = name;
    a.geometry = {name, kind, std::uint32_t(bits / 64), 64, bits, 0};
    a.sigma_bit_cm2 = sigma_bit;
    a.shapes = ShapeDistribution::single_bit_only();
    return a;
}

} // namespace

TEST_CASE("arrival sampling") {
    Rng rng(1);
    CHECK(sample_arrivals(0, 100, rng).empty());
    CHECK_THROWS_AS(sample_arrivals(-1, 10, rng), ValidationError);

    // 8 per minute over 60 minutes: mean count 480, variance ~480.
    const double rate = 8.0, horizon = 60.0;
    const int trials = 4000;
    double sum = 0, sum_sq = 0;
    for (int i = 0; i < trials; ++i) {
        Rng r(Rng::derive_stream(42, std::uint64_t(i)));
        const double n = double(sample_arrivals(rate, horizon, r).size());
        sum += n;
        sum_sq += n * n;
    }
    const double mean = sum / trials;
    const double var = sum_sq / trials - mean * mean;
    CHECK(mean == doctest::Approx(480).epsilon(0.01));
    CHECK(var == doctest::Approx(480).epsilon(0.10));

    // Ordered output.
    Rng r2(7);
    const auto times = sample_arrivals(5, 200, r2);
    CHECK(std::is_sorted(times.begin(), times.end()));
}

TEST_CASE("inter-arrival times pass a KS test against the exponential") {
    Rng rng(4242);
    const double rate = 2.0;
    std::vector<double> gaps;
    double prev = 0;
    const auto times = sample_arrivals(rate, 4000, rng);
    for (double t : times) {
        gaps.push_back(t - prev);
        prev = t;
    }
    REQUIRE(gaps.size() > 5000);
    gaps.resize(5000);
    const double d = oracles::ks_statistic(
        gaps, [rate](double x) { return 1.0 - std::exp(-rate * x); });
    // alpha = 0.01 critical value.
    CHECK(d < 1.628 / std::sqrt(5000.0));
}

TEST_CASE("shape sampling frequencies") {
    const ShapeDistribution dist = table_shapes();
    Rng rng(99);
    std::map<std::string, int> tally;
    const int draws = 200000;
    for (int i = 0; i < draws; ++i) ++tally[sample_shape(dist, rng).key()];
    for (const auto& e : dist.entries) {
        const double p_hat = double(tally[e.shape.key()]) / draws;
        const double sigma = std::sqrt(e.probability * (1 - e.probability) / draws);
        CHECK(std::fabs(p_hat - e.probability) < 4 * sigma);
    }
}

TEST_CASE("upset placement stays in bounds") {
    const ShapeDistribution dist = table_shapes();
    const MemoryGeometry g = grid(12, 4);
    Rng rng(5);
    for (int i = 0; i < 100000; ++i) {
        const auto bits = place_upset(sample_shape(dist, rng), g, rng);
        REQUIRE(!bits.empty());
        for (const auto& b : bits) {
            CHECK(b.frame < g.frame_count);
            CHECK(b.bit < g.bits_per_frame);
        }
    }

    // An SBU is exactly one bit.
    const auto sbu = place_upset(ShapeSignature::from_offsets({{0, 0}}), g, rng);
    CHECK(sbu.size() == 1);

    // A shape wider than the grid cannot be placed.
    CHECK_THROWS_AS(place_upset(ShapeSignature::from_offsets({{0, 0}, {12, 0}}), g, rng),
                    ValidationError);
}

TEST_CASE("anchor distribution covers the admissible range uniformly") {
    const MemoryGeometry g = grid(4, 4);
    const ShapeSignature pair = ShapeSignature::from_offsets({{0, 0}, {1, 0}});
    Rng rng(6);
    std::map<std::uint32_t, int> anchors;
    for (int i = 0; i < 30000; ++i) ++anchors[place_upset(pair, g, rng)[0].frame];
    REQUIRE(anchors.size() == 3); // frames 0..2 for a 2-frame shape in 4 frames
    for (const auto& [frame, count] : anchors)
        CHECK(double(count) / 30000 == doctest::Approx(1.0 / 3).epsilon(0.05));
}

TEST_CASE("scrub race: fast scrubbing keeps the backlog below one") {
    ScrubRaceConfig cfg; // 8/min vs 1700/min defaults
    cfg.trials = 16;
    cfg.horizon_minutes = 240;
    cfg.seed = 3;
    const SimResult r = run_scrub_race(cfg);
    CHECK(r.steady_state_backlog < 1.0);
    CHECK(r.uncorrected_accumulation.size() == cfg.series_points);
}

TEST_CASE("scrub race: no scrubbing accumulates linearly") {
    ScrubRaceConfig cfg;
    cfg.scrub_rate_per_min = 0;
    cfg.arrival_rate_per_min = 8;
    cfg.horizon_minutes = 500;
    cfg.trials = 24;
    cfg.seed = 5;
    const SimResult r = run_scrub_race(cfg);
    const double expected_end = cfg.arrival_rate_per_min * cfg.horizon_minutes;
    const double end = r.uncorrected_accumulation.back().second;
    CHECK(end == doctest::Approx(expected_end).epsilon(0.05));
    // Half the horizon, half the accumulation.
    const double mid = r.uncorrected_accumulation[cfg.series_points / 2 - 1].second;
    CHECK(mid == doctest::Approx(expected_end / 2).epsilon(0.1));
}

TEST_CASE("scrub race: critically loaded scrubber grows sublinearly") {
    ScrubRaceConfig base;
    base.scrub_rate_per_min = 0;
    base.arrival_rate_per_min = 8;
    base.horizon_minutes = 500;
    base.trials = 24;
    base.seed = 7;
    const double unscrubbed = run_scrub_race(base).uncorrected_accumulation.back().second;

    ScrubRaceConfig critical = base;
    critical.scrub_rate_per_min = base.arrival_rate_per_min;
    const double loaded = run_scrub_race(critical).uncorrected_accumulation.back().second;
    CHECK(loaded < 0.5 * unscrubbed);
    CHECK(loaded > 0); // the random walk does not collapse to zero either
}

TEST_CASE("scrub race rejects invalid configs") {
    ScrubRaceConfig cfg;
    cfg.trials = 0;
    CHECK_THROWS_AS(run_scrub_race(cfg), ValidationError);
}

TEST_CASE("unmitigated single array reproduces the analytic MTTU") {
    // lambda = sigma_bit * bits * flux = 1e-10 * 1e6 * 13 = 1.3e-3 per hour.
    const std::vector<SimArray> arrays = {simple_array("a", 1e-10, 1000000)};
    FailureCampaignConfig cfg;
    cfg.trials = 10000;
    cfg.seed = 11;
    const SimResult r = run_failure_campaign(arrays, cfg);
    const double analytic =
        1.0 / combined_upset_rate_per_hour(arrays, cfg.environment, cfg.deployment);
    REQUIRE(r.mean_time.has_value());
    CHECK(std::fabs(r.mean_time->hours - analytic) < 3 * r.standard_error_hours);
}

TEST_CASE("superposition of two arrays") {
    const std::vector<SimArray> arrays = {simple_array("a", 1e-10, 1000000),
                                          simple_array("b", 3e-10, 512000)};
    FailureCampaignConfig cfg;
    cfg.trials = 10000;
    cfg.seed = 13;
    const SimResult r = run_failure_campaign(arrays, cfg);
    const double analytic =
        1.0 / combined_upset_rate_per_hour(arrays, cfg.environment, cfg.deployment);
    REQUIRE(r.mean_time.has_value());
    CHECK(std::fabs(r.mean_time->hours - analytic) < 3 * r.standard_error_hours);
    // Both arrays take first-failure credit.
    CHECK(r.failure_counts.at("a") > 0);
    CHECK(r.failure_counts.at("b") > 0);
}

TEST_CASE("identical seed and config give a bit-identical result") {
    const std::vector<SimArray> arrays = {simple_array("a", 1e-10, 1000000)};
    FailureCampaignConfig cfg;
    cfg.trials = 2000;
    cfg.seed = 17;
    cfg.exec = Exec::parallel;
    const SimResult r1 = run_failure_campaign(arrays, cfg);
    const SimResult r2 = run_failure_campaign(arrays, cfg);
    CHECK(r1.time_to_first_failure_hours == r2.time_to_first_failure_hours);
    CHECK(r1.censored == r2.censored);

    cfg.exec = Exec::serial;
    const SimResult r3 = run_failure_campaign(arrays, cfg);
    CHECK(r1.time_to_first_failure_hours == r3.time_to_first_failure_hours);
    CHECK(r1.failure_counts == r3.failure_counts);

    cfg.seed = 18;
    cfg.exec = Exec::parallel;
    const SimResult r4 = run_failure_campaign(arrays, cfg);
    CHECK(r1.time_to_first_failure_hours != r4.time_to_first_failure_hours);
}

TEST_CASE("frame SECDED recovers every multi-frame event") {
    // All bundled shapes place at most one bit per frame, so per-frame ECC
    // corrects every arrival.
    SimArray cram = simple_array("CRAM", 1e-10, 64000);
    cram.geometry = grid(1000, 64);
    cram.shapes = table_shapes();

    FailureCampaignConfig cfg;
    cfg.trials = 1500;
    cfg.seed = 19;
    cfg.horizon_hours = 5.0 / (1e-10 * 64000 * 13);
    cfg.mitigation.frame_ecc = true;
    const SimResult r = run_failure_campaign({cram}, cfg);
    CHECK(r.time_to_first_failure_hours.empty());
    CHECK(r.censored == cfg.trials);

    // Without ECC the same stream fails on the first arrival.
    cfg.mitigation.frame_ecc = false;
    const SimResult r_raw = run_failure_campaign({cram}, cfg);
    CHECK(r_raw.time_to_first_failure_hours.size() + r_raw.censored == cfg.trials);
    CHECK(!r_raw.time_to_first_failure_hours.empty());
}

TEST_CASE("interleaving suppresses same-frame multiplicity") {
    // A hostile distribution: every event is a same-frame double bit.
    SimArray array = simple_array("B", 1e-10, 64000);
    array.geometry = grid(1000, 64);
    std::vector<ShapeDistribution::Entry> entries;
    ShapeDistribution::Entry e;
    e.shape = ShapeSignature::from_offsets({{0, 0}, {0, 1}});
    e.raw_percent = 100;
    entries.push_back(e);
    array.shapes = ShapeDistribution::from_raw_percentages(std::move(entries));

    FailureCampaignConfig cfg;
    cfg.trials = 1000;
    cfg.seed = 23;
    cfg.horizon_hours = 5.0 / (1e-10 * 64000 * 13);
    cfg.mitigation.frame_ecc = true;

    const SimResult beaten = run_failure_campaign({array}, cfg);
    CHECK(!beaten.time_to_first_failure_hours.empty()); // MBUs beat per-frame ECC

    cfg.mitigation.interleaving = true;
    const SimResult spread = run_failure_campaign({array}, cfg);
    CHECK(spread.time_to_first_failure_hours.empty()); // interleaved bits land in distinct frames
}

TEST_CASE("cache policies order the failure rate") {
    SimArray cache = simple_array("L1", 2e-9, 262144, MemoryKind::cache_array);
    std::vector<ShapeDistribution::Entry> entries;
    ShapeDistribution::Entry single{ShapeSignature::from_offsets({{0, 0}}), 0, 90, "sbu"};
    ShapeDistribution::Entry dbl{ShapeSignature::from_offsets({{0, 0}, {0, 1}}), 0, 10, "dbu"};
    entries = {single, dbl};
    cache.shapes = ShapeDistribution::from_raw_percentages(std::move(entries));

    FailureCampaignConfig cfg;
    cfg.trials = 4000;
    cfg.seed = 29;
    cfg.horizon_hours = 3.0 / (2e-9 * 262144 * 13);
    cfg.mitigation.dirty_line_fraction = 0.5;

    auto failures_with = [&](CachePolicy policy) {
        cfg.mitigation.cache_policy["L1"] = policy;
        return run_failure_campaign({cache}, cfg);
    };

    const SimResult none = failures_with(CachePolicy::none);
    const SimResult parity = failures_with(CachePolicy::parity_detect_invalidate);
    const SimResult secded = failures_with(CachePolicy::secded_correct);

    CHECK(none.time_to_first_failure_hours.size() >= parity.time_to_first_failure_hours.size());
    CHECK(parity.time_to_first_failure_hours.size() >= secded.time_to_first_failure_hours.size());
    CHECK(!secded.time_to_first_failure_hours.empty()); // dirty double-bits still get through

    // With a clean cache nothing is ever lost under SECDED.
    cfg.mitigation.dirty_line_fraction = 0.0;
    const SimResult clean = failures_with(CachePolicy::secded_correct);
    CHECK(clean.time_to_first_failure_hours.empty());

    // With an always-dirty cache, parity fails on every arrival like none.
    cfg.mitigation.dirty_line_fraction = 1.0;
    const SimResult dirty_parity = failures_with(CachePolicy::parity_detect_invalidate);
    CHECK(dirty_parity.time_to_first_failure_hours.size() ==
          none.time_to_first_failure_hours.size());
}

TEST_CASE("mitigation never increases the failure count under a shared seed") {
    SimArray cram = simple_array("CRAM", 5e-10, 64000);
    cram.geometry = grid(1000, 64);
    cram.shapes = table_shapes();

    FailureCampaignConfig cfg;
    cfg.trials = 3000;
    cfg.seed = 31;
    cfg.horizon_hours = 4.0 / (5e-10 * 64000 * 13);

    cfg.mitigation.frame_ecc = false;
    const auto raw = run_failure_campaign({cram}, cfg).time_to_first_failure_hours.size();
    cfg.mitigation.frame_ecc = true;
    const auto ecc = run_failure_campaign({cram}, cfg).time_to_first_failure_hours.size();
    cfg.mitigation.interleaving = true;
    const auto both = run_failure_campaign({cram}, cfg).time_to_first_failure_hours.size();
    CHECK(raw >= ecc);
    CHECK(ecc >= both);
}

TEST_CASE("invalid campaign configs are rejected") {
    FailureCampaignConfig cfg;
    CHECK_THROWS_AS(run_failure_campaign({}, cfg), ValidationError);

    const std::vector<SimArray> arrays = {simple_array("a", 1e-10, 1024)};
    cfg.trials = 0;
    CHECK_THROWS_AS(run_failure_campaign(arrays, cfg), ValidationError);

    cfg.trials = 10;
    cfg.mitigation.dirty_line_fraction = 1.5;
    CHECK_THROWS_AS(run_failure_campaign(arrays, cfg), ValidationError);
}
