// Compares the OpenMP kernels against their serial reference on the two
// hot paths: readback diff extraction and Monte Carlo failure trials.

#include <chrono>
#include <cstdio>
#include <random>

#include <CLI11.hpp>

#include "radrel/readback.hpp"
#include "radrel/sim.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

radrel::ReadbackCampaign synthetic_campaign(std::uint32_t frames, std::uint32_t bits_per_frame,
                                            std::uint32_t cycles, std::uint32_t upsets_per_cycle) {
    using namespace radrel;
    ReadbackCampaign c;
    c.geometry = {"bench", MemoryKind::cram, frames, bits_per_frame,
                  std::uint64_t(frames) * bits_per_frame, 0};
    c.golden = BitArray(c.geometry.total_bits);
    c.mask = BitArray(c.geometry.total_bits);
    for (std::uint64_t i = 0; i < c.geometry.total_bits; ++i) c.mask.set(i);
    c.fluence = Fluence(1e11);
    c.config_period = 0;

    std::mt19937_64 rng(7);
    for (std::uint32_t cy = 0; cy < cycles; ++cy) {
        BitArray readback = c.golden;
        for (std::uint32_t u = 0; u < upsets_per_cycle; ++u)
            readback.flip(rng() % c.geometry.total_bits);
        c.cycles.push_back(std::move(readback));
    }
    return c;
}

template <typename F>
double best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto start = Clock::now();
        fn();
        best = std::min(best, seconds_since(start));
    }
    return best;
}

} // namespace

int main(int argc, char** argv) {
    using namespace radrel;

    CLI::App app{"radrel kernel benchmark: serial reference vs OpenMP"};
    std::uint32_t frames = 8192;
    std::uint32_t bits_per_frame = 2048;
    std::uint32_t cycles = 24;
    std::uint32_t trials = 20000;
    int reps = 3;
    app.add_option("--frames", frames)->capture_default_str();
    app.add_option("--bits-per-frame", bits_per_frame)->capture_default_str();
    app.add_option("--cycles", cycles)->capture_default_str();
    app.add_option("--trials", trials)->capture_default_str();
    app.add_option("--reps", reps)->capture_default_str();
    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    std::printf("openmp: %d thread(s)\n", omp_get_max_threads());
#else
    std::printf("openmp: compiled out (serial build)\n");
#endif

    const ReadbackCampaign campaign = synthetic_campaign(frames, bits_per_frame, cycles, 400);
    std::printf("campaign: %u cycles x %llu bits\n", cycles,
                static_cast<unsigned long long>(campaign.geometry.total_bits));

    AnalysisOptions serial_opt;
    serial_opt.exec = Exec::serial;
    AnalysisOptions parallel_opt;
    parallel_opt.exec = Exec::parallel;

    const double t_serial = best_of(reps, [&] { (void)analyze_campaign(campaign, serial_opt); });
    const double t_parallel = best_of(reps, [&] { (void)analyze_campaign(campaign, parallel_opt); });
    std::printf("%-28s %10.4f s   %10.4f s   speedup %.2fx\n", "analyze_campaign",
                t_serial, t_parallel, t_serial / t_parallel);

    std::vector<SimArray> arrays;
    SimArray a;
    a.name = "bench";
    a.geometry = campaign.geometry;
    a.sigma_bit_cm2 = 1.84e-16;
    a.shapes = ShapeDistribution::single_bit_only();
    arrays.push_back(a);

    FailureCampaignConfig cfg;
    cfg.environment = Environment::nyc_40kft();
    cfg.trials = trials;
    cfg.seed = 99;

    cfg.exec = Exec::serial;
    const double s_serial = best_of(reps, [&] { (void)run_failure_campaign(arrays, cfg); });
    cfg.exec = Exec::parallel;
    const double s_parallel = best_of(reps, [&] { (void)run_failure_campaign(arrays, cfg); });
    std::printf("%-28s %10.4f s   %10.4f s   speedup %.2fx\n", "run_failure_campaign",
                s_serial, s_parallel, s_serial / s_parallel);

    // The parallel kernels promise bit-identical output; spot-check here too.
    cfg.exec = Exec::serial;
    const SimResult r1 = run_failure_campaign(arrays, cfg);
    cfg.exec = Exec::parallel;
    const SimResult r2 = run_failure_campaign(arrays, cfg);
    const bool identical = r1.time_to_first_failure_hours == r2.time_to_first_failure_hours &&
                           r1.censored == r2.censored;
    std::printf("serial/parallel results identical: %s\n", identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
