#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "radrel/units.hpp"

namespace radrel {

// --- chi-square machinery -------------------------------------------------
//
// Quantiles are obtained by inverting the regularised incomplete gamma
// function (series expansion below a+1, Lentz continued fraction above),
// refined with Newton steps to ~1E-12 relative accuracy. No statistics
// library is assumed.

/// Regularised lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

/// Quantile of the chi-square distribution with `dof` degrees of freedom.
double chi_square_quantile(double p, double dof);

/// Exact Poisson confidence bounds on an event count (Garwood):
///   low  = chi2_quantile(alpha/2, 2n) / 2        (0 for n = 0)
///   high = chi2_quantile(1 - alpha/2, 2n + 2) / 2
/// with alpha = 1 - confidence.
std::pair<double, double> garwood_interval(std::uint64_t n_events, double confidence);

// --- cross-section estimation ----------------------------------------------

enum class Basis { per_device, per_bit };

struct CrossSectionEstimate {
    std::uint64_t n_events = 0;
    double fluence_n_per_cm2 = 0;
    double mean_cm2 = 0;   // n / fluence (further divided by bit_count for per-bit)
    double ci_low_cm2 = 0; // 0 when no events observed (one-sided upper bound only)
    double ci_high_cm2 = 0;
    double confidence = 0.95;
    Basis basis = Basis::per_device;
    std::uint64_t bit_count = 0; // divisor when basis == per_bit

    bool none_observed() const { return n_events == 0; }
};

struct EstimateOptions {
    double confidence = 0.95;
    Basis basis = Basis::per_device;
    std::uint64_t bit_count = 0;
    // Optional widening for the stated fluence uncertainty: low /= 1+f,
    // high /= 1-f. Off by default.
    bool fluence_uncertainty = false;
    double fluence_uncertainty_fraction = 0.10;
};

CrossSectionEstimate estimate_cross_section(std::uint64_t n_events, Fluence fluence,
                                            const EstimateOptions& options = {});

// --- run-log accounting -----------------------------------------------------

enum class RunResult {
    correct,
    tolerable_sdc,
    critical_sdc,
    crash_recoverable,
    crash_soft_persistent,
    timeout,
};

std::string to_string(RunResult r);
RunResult run_result_from_string(const std::string& s);

struct RunOutcome {
    std::string benchmark;
    RunResult result = RunResult::correct;
    double duration_s = 0;
};

struct CategoryCounts {
    std::uint64_t runs = 0;
    std::uint64_t correct = 0;
    std::uint64_t tolerable_sdc = 0;
    std::uint64_t critical_sdc = 0;
    std::uint64_t crash_recoverable = 0;
    std::uint64_t crash_soft_persistent = 0;
    std::uint64_t timeout = 0;

    std::uint64_t sdc_total() const { return tolerable_sdc + critical_sdc; }
    // Result-query timeouts are folded into the crash (hang) bucket.
    std::uint64_t crash_total() const { return crash_recoverable + crash_soft_persistent + timeout; }
    std::uint64_t error_total() const { return sdc_total() + crash_total(); }

    void validate() const; // category counts must sum to runs
};

struct CampaignLog {
    std::string benchmark;
    CategoryCounts counts;
    Fluence fluence{0};
    std::optional<Flux> flux_during_test;

    static CampaignLog from_runs(std::string benchmark, std::span<const RunOutcome> runs,
                                 Fluence fluence, std::optional<Flux> flux = std::nullopt);
};

/// Per-category estimates plus the combined SDC / crash / all-error ones.
struct DynamicCrossSections {
    CrossSectionEstimate critical_sdc;
    CrossSectionEstimate tolerable_sdc;
    CrossSectionEstimate sdc_combined;
    CrossSectionEstimate crash_recoverable;
    CrossSectionEstimate crash_soft_persistent;
    CrossSectionEstimate timeout;
    CrossSectionEstimate crash_combined;
    CrossSectionEstimate all_errors;

    std::vector<std::pair<std::string, const CrossSectionEstimate*>> items() const;
};

DynamicCrossSections dynamic_cross_sections(const CampaignLog& log,
                                            const EstimateOptions& options = {});

/// FIT split by error category. fit_all = fit_c_plus_h + fit_tolerable holds
/// exactly (same floating-point association on both sides).
struct ErrorRateBreakdown {
    FitRate critical;
    FitRate tolerable;
    FitRate hang;

    FitRate c_plus_h() const { return critical + hang; }
    FitRate all() const { return c_plus_h() + tolerable; }
};

ErrorRateBreakdown breakdown_from_log(const CampaignLog& log, Flux flux);

} // namespace radrel
