#include "radrel/projection.hpp"

#include <algorithm>
#include <cmath>

#include "radrel/errors.hpp"

namespace radrel {

Environment Environment::nyc_sea_level() { return {"nyc_sea_level", 1.0}; }

Environment Environment::nyc_40kft() { return {"nyc_40kft", 500.0}; }

Environment Environment::with_flux(std::string name, double flux_per_cm2_hour) {
    if (flux_per_cm2_hour <= 0) throw ValidationError("environment flux must be positive");
    return {std::move(name), flux_per_cm2_hour / kNycSeaLevelFlux};
}

Environment Environment::by_name(const std::string& name) {
    if (name == "nyc_sea_level") return nyc_sea_level();
    if (name == "nyc_40kft") return nyc_40kft();
    throw ValidationError("unknown environment name: " + name);
}

std::vector<std::string> Environment::builtin_names() { return {"nyc_sea_level", "nyc_40kft"}; }

std::string to_string(RateVariant v) { return v == RateVariant::all ? "All" : "C+H"; }

namespace {

ProjectionRow make_row(const std::string& subject, FitRate base_fit, const Environment& env,
                       const Deployment& dep, MeanTimeTo::Kind kind,
                       std::optional<RateVariant> variant) {
    if (env.flux_multiplier <= 0) throw ValidationError("environment flux must be positive");
    if (dep.n_devices == 0) throw ValidationError("a deployment needs at least one device");
    // Single combined scale factor: multiplying flux by k or deploying k
    // devices lands on the same floating-point value.
    const FitRate fit = base_fit.scaled(env.flux_multiplier * double(dep.n_devices));
    ProjectionRow row;
    row.subject = subject;
    row.environment = env.name;
    row.n_devices = dep.n_devices;
    row.fit = fit;
    row.mean_time = mean_time_from_fit(fit, kind);
    row.variant = variant;
    return row;
}

} // namespace

ProjectionRow project(const std::string& subject, double sigma_device_cm2, const Environment& env,
                      const Deployment& dep, MeanTimeTo::Kind kind) {
    const FitRate base = fit_from_cross_section(sigma_device_cm2, Flux(kNycSeaLevelFlux));
    return make_row(subject, base, env, dep, kind, std::nullopt);
}

std::vector<ProjectionRow> mttf_table(
    const std::vector<std::pair<std::string, ErrorRateBreakdown>>& breakdowns,
    const Environment& env, const Deployment& dep) {
    std::vector<ProjectionRow> rows;
    rows.reserve(breakdowns.size() * 2);
    for (const auto& [name, breakdown] : breakdowns) {
        rows.push_back(
            make_row(name, breakdown.all(), env, dep, MeanTimeTo::Kind::failure, RateVariant::all));
        rows.push_back(make_row(name, breakdown.c_plus_h(), env, dep, MeanTimeTo::Kind::failure,
                                RateVariant::c_plus_h));
    }
    return rows;
}

std::vector<std::pair<Environment, Deployment>> projection_presets() {
    return {
        {Environment::nyc_sea_level(), Deployment{1}},
        {Environment::nyc_40kft(), Deployment{1}},
        {Environment::nyc_sea_level(), Deployment{1000}},
    };
}

std::vector<ProjectionRow> preset_rows(const std::string& subject, double sigma_device_cm2,
                                       MeanTimeTo::Kind kind) {
    std::vector<ProjectionRow> rows;
    for (const auto& [env, dep] : projection_presets())
        rows.push_back(project(subject, sigma_device_cm2, env, dep, kind));
    return rows;
}

std::vector<ProjectionRow> preset_rows_from_base(const std::string& subject, double base_months,
                                                 MeanTimeTo::Kind kind) {
    if (base_months <= 0) throw ValidationError("base mean time must be positive");
    std::vector<ProjectionRow> rows;
    const double base_hours = base_months * kHoursPerMonth;
    for (const auto& [env, dep] : projection_presets()) {
        const double scale = env.flux_multiplier * double(dep.n_devices);
        ProjectionRow row;
        row.subject = subject;
        row.environment = env.name;
        row.n_devices = dep.n_devices;
        row.mean_time = MeanTimeTo{base_hours / scale, kind};
        row.fit = FitRate(kFitReferenceHours / row.mean_time->hours);
        rows.push_back(std::move(row));
    }
    return rows;
}

RatioReport ratio_report(const std::vector<ProjectionRow>& rows,
                         const std::vector<std::string>& sw_only_subjects) {
    if (rows.empty()) return {};
    for (const ProjectionRow& r : rows)
        if (r.environment != rows.front().environment || r.n_devices != rows.front().n_devices)
            throw ValidationError("ratio report rows must share environment and deployment");

    auto hours_of = [](const ProjectionRow& r) -> double {
        return r.mean_time ? r.mean_time->hours : 0;
    };
    auto is_sw_only = [&](const std::string& subject) {
        return std::find(sw_only_subjects.begin(), sw_only_subjects.end(), subject) !=
               sw_only_subjects.end();
    };

    RatioReport report;

    // C+H over All per subject.
    for (const ProjectionRow& all_row : rows) {
        if (all_row.variant != RateVariant::all || !all_row.mean_time) continue;
        for (const ProjectionRow& ch_row : rows) {
            if (ch_row.subject != all_row.subject || ch_row.variant != RateVariant::c_plus_h ||
                !ch_row.mean_time)
                continue;
            report.improvements.push_back(
                {all_row.subject, hours_of(ch_row) / hours_of(all_row)});
        }
    }

    // Pairwise degradations within one variant; only the worse-off subject
    // of a pair is reported ("subject is X% lower than reference").
    for (const ProjectionRow& a : rows) {
        if (!a.variant || !a.mean_time) continue;
        for (const ProjectionRow& b : rows) {
            if (!b.variant || b.variant != a.variant || !b.mean_time || a.subject == b.subject)
                continue;
            if (hours_of(a) >= hours_of(b)) continue;
            report.degradations.push_back(
                {a.subject, b.subject, *a.variant, 1.0 - hours_of(a) / hours_of(b)});
        }
    }

    // Mean of the SW-only group against every other application.
    if (!sw_only_subjects.empty()) {
        double sum = 0;
        std::uint64_t count = 0;
        for (const ProjectionRow& r : rows) {
            if (r.variant == RateVariant::all && r.mean_time && is_sw_only(r.subject)) {
                sum += hours_of(r);
                ++count;
            }
        }
        if (count > 0) {
            const double group_mean = sum / double(count);
            for (const ProjectionRow& r : rows) {
                if (r.variant == RateVariant::all && r.mean_time && !is_sw_only(r.subject))
                    report.group_comparisons.push_back(
                        {"sw-only mean", r.subject, group_mean / hours_of(r)});
            }
        }
    }
    return report;
}

} // namespace radrel
