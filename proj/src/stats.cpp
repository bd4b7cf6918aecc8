#include "radrel/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "radrel/errors.hpp"

namespace radrel {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

// Both expansions need O(sqrt(a)) terms to converge near x ~ a, so the
// iteration budget grows with the shape parameter (roughly 8.6 sqrt(a)
// terms reach machine epsilon; the factor below leaves margin).
int iteration_budget(double a) { return 500 + int(30.0 * std::sqrt(a + 1.0)); }

// Series expansion of P(a,x), valid (and fast) for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    const int max_iter = iteration_budget(a);
    for (int i = 0; i < max_iter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz continued fraction for Q(a,x), valid for x >= a + 1.
double gamma_q_continued_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    const int max_iter = iteration_budget(a);
    for (int i = 1; i <= max_iter; ++i) {
        const double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Gamma pdf value, used as the derivative in the Newton refinement.
double gamma_pdf(double a, double x) {
    if (x <= 0) return 0;
    return std::exp((a - 1.0) * std::log(x) - x - std::lgamma(a));
}

// Inverse of P(a, .) at probability p, to ~1E-12 relative accuracy.
// Newton from the distribution mean, with a maintained bracket and
// bisection fallback for the rare step that leaves it.
double inverse_gamma_p(double a, double p) {
    if (p <= 0) return 0;

    double lo = 0;
    double hi = std::max(a + 10.0 * std::sqrt(a) + 10.0, 10.0);
    while (regularized_gamma_p(a, hi) < p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) throw ValidationError("gamma quantile out of range");
    }

    double x = std::clamp(a, lo + 0.25 * (hi - lo), hi - 0.25 * (hi - lo));
    for (int i = 0; i < 200; ++i) {
        const double f = regularized_gamma_p(a, x) - p;
        if (f > 0)
            hi = x;
        else
            lo = x;
        const double df = gamma_pdf(a, x);
        double next = (df > 0) ? x - f / df : 0;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double dx = std::fabs(next - x);
        x = next;
        if (dx <= 1e-13 * (x + 1e-30)) break;
    }
    return x;
}

CrossSectionEstimate make_estimate(std::uint64_t n, double fluence, const EstimateOptions& opt) {
    if (fluence <= 0) throw ValidationError("fluence must be positive for a cross-section estimate");
    if (opt.basis == Basis::per_bit && opt.bit_count == 0)
        throw ValidationError("per-bit basis needs a bit count");

    const double divisor =
        fluence * (opt.basis == Basis::per_bit ? double(opt.bit_count) : 1.0);

    auto [low_count, high_count] = garwood_interval(n, opt.confidence);

    CrossSectionEstimate e;
    e.n_events = n;
    e.fluence_n_per_cm2 = fluence;
    e.mean_cm2 = double(n) / divisor;
    e.ci_low_cm2 = low_count / divisor;
    e.ci_high_cm2 = high_count / divisor;
    e.confidence = opt.confidence;
    e.basis = opt.basis;
    e.bit_count = opt.bit_count;
    if (opt.fluence_uncertainty) {
        const double f = opt.fluence_uncertainty_fraction;
        if (f < 0 || f >= 1) throw ValidationError("fluence uncertainty fraction must be in [0,1)");
        e.ci_low_cm2 /= (1.0 + f);
        e.ci_high_cm2 /= (1.0 - f);
    }
    return e;
}

} // namespace

double regularized_gamma_p(double a, double x) {
    if (a <= 0) throw ValidationError("gamma shape must be positive");
    if (x < 0) throw ValidationError("gamma argument must be non-negative");
    if (x == 0) return 0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_continued_fraction(a, x);
}

double chi_square_quantile(double p, double dof) {
    if (p < 0 || p >= 1) throw ValidationError("chi-square quantile probability must be in [0,1)");
    if (dof <= 0) throw ValidationError("chi-square degrees of freedom must be positive");
    return 2.0 * inverse_gamma_p(0.5 * dof, p);
}

std::pair<double, double> garwood_interval(std::uint64_t n_events, double confidence) {
    if (confidence < 0 || confidence >= 1)
        throw ValidationError("confidence must be in [0, 1)");
    const double alpha = 1.0 - confidence;
    const double low =
        n_events == 0 ? 0.0 : 0.5 * chi_square_quantile(alpha / 2.0, 2.0 * double(n_events));
    const double high = 0.5 * chi_square_quantile(1.0 - alpha / 2.0, 2.0 * double(n_events) + 2.0);
    return {low, high};
}

CrossSectionEstimate estimate_cross_section(std::uint64_t n_events, Fluence fluence,
                                            const EstimateOptions& options) {
    return make_estimate(n_events, fluence.n_per_cm2(), options);
}

std::string to_string(RunResult r) {
    switch (r) {
        case RunResult::correct: return "correct";
        case RunResult::tolerable_sdc: return "tolerable_sdc";
        case RunResult::critical_sdc: return "critical_sdc";
        case RunResult::crash_recoverable: return "crash_recoverable";
        case RunResult::crash_soft_persistent: return "crash_soft_persistent";
        case RunResult::timeout: return "timeout";
    }
    return "?";
}

RunResult run_result_from_string(const std::string& s) {
    if (s == "correct") return RunResult::correct;
    if (s == "tolerable_sdc") return RunResult::tolerable_sdc;
    if (s == "critical_sdc") return RunResult::critical_sdc;
    if (s == "crash_recoverable") return RunResult::crash_recoverable;
    if (s == "crash_soft_persistent") return RunResult::crash_soft_persistent;
    if (s == "timeout") return RunResult::timeout;
    throw ValidationError("unknown run result category: " + s);
}

void CategoryCounts::validate() const {
    const std::uint64_t sum = correct + tolerable_sdc + critical_sdc + crash_recoverable +
                              crash_soft_persistent + timeout;
    if (sum != runs)
        throw ValidationError("category counts (" + std::to_string(sum) +
                              ") do not sum to total runs (" + std::to_string(runs) + ")");
}

CampaignLog CampaignLog::from_runs(std::string benchmark, std::span<const RunOutcome> runs,
                                   Fluence fluence, std::optional<Flux> flux) {
    CampaignLog log;
    log.benchmark = std::move(benchmark);
    log.fluence = fluence;
    log.flux_during_test = flux;
    log.counts.runs = runs.size();
    for (const RunOutcome& r : runs) {
        switch (r.result) {
            case RunResult::correct: ++log.counts.correct; break;
            case RunResult::tolerable_sdc: ++log.counts.tolerable_sdc; break;
            case RunResult::critical_sdc: ++log.counts.critical_sdc; break;
            case RunResult::crash_recoverable: ++log.counts.crash_recoverable; break;
            case RunResult::crash_soft_persistent: ++log.counts.crash_soft_persistent; break;
            case RunResult::timeout: ++log.counts.timeout; break;
        }
    }
    return log;
}

std::vector<std::pair<std::string, const CrossSectionEstimate*>> DynamicCrossSections::items() const {
    return {
        {"critical_sdc", &critical_sdc},
        {"tolerable_sdc", &tolerable_sdc},
        {"sdc_combined", &sdc_combined},
        {"crash_recoverable", &crash_recoverable},
        {"crash_soft_persistent", &crash_soft_persistent},
        {"timeout", &timeout},
        {"crash_combined", &crash_combined},
        {"all_errors", &all_errors},
    };
}

DynamicCrossSections dynamic_cross_sections(const CampaignLog& log, const EstimateOptions& options) {
    log.counts.validate();
    if (log.fluence.n_per_cm2() <= 0) throw ValidationError("campaign log needs a positive fluence");

    auto est = [&](std::uint64_t n) { return make_estimate(n, log.fluence.n_per_cm2(), options); };

    DynamicCrossSections d;
    d.critical_sdc = est(log.counts.critical_sdc);
    d.tolerable_sdc = est(log.counts.tolerable_sdc);
    d.sdc_combined = est(log.counts.sdc_total());
    d.crash_recoverable = est(log.counts.crash_recoverable);
    d.crash_soft_persistent = est(log.counts.crash_soft_persistent);
    d.timeout = est(log.counts.timeout);
    d.crash_combined = est(log.counts.crash_total());
    d.all_errors = est(log.counts.error_total());
    return d;
}

ErrorRateBreakdown breakdown_from_log(const CampaignLog& log, Flux flux) {
    log.counts.validate();
    if (flux.per_cm2_hour() <= 0) throw ValidationError("breakdown needs a positive flux");
    const double fluence = log.fluence.n_per_cm2();
    if (fluence <= 0) throw ValidationError("campaign log needs a positive fluence");

    auto fit = [&](std::uint64_t n) {
        return fit_from_cross_section(double(n) / fluence, flux);
    };

    ErrorRateBreakdown b;
    b.critical = fit(log.counts.critical_sdc);
    b.tolerable = fit(log.counts.tolerable_sdc);
    b.hang = fit(log.counts.crash_total());
    return b;
}

} // namespace radrel
