#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "radrel/stats.hpp"
#include "radrel/units.hpp"

namespace radrel {

/// A terrestrial radiation environment, expressed as a multiplier over the
/// NYC sea-level reference flux so that environment scaling stays exactly
/// multiplicative. Built-ins: nyc_sea_level (x1) and nyc_40kft (x500).
struct Environment {
    std::string name;
    double flux_multiplier = 1.0;

    double resolved_flux() const { return kNycSeaLevelFlux * flux_multiplier; }

    static Environment nyc_sea_level();
    static Environment nyc_40kft();
    static Environment with_flux(std::string name, double flux_per_cm2_hour);
    static Environment by_name(const std::string& name); // throws ValidationError if unknown
    static std::vector<std::string> builtin_names();
};

struct Deployment {
    std::uint64_t n_devices = 1;
};

enum class RateVariant { all, c_plus_h };

std::string to_string(RateVariant v);

struct ProjectionRow {
    std::string subject;
    std::string environment;
    std::uint64_t n_devices = 1;
    FitRate fit;
    std::optional<MeanTimeTo> mean_time; // nullopt when no failures observed
    std::optional<RateVariant> variant;  // applications only
};

/// fit = (sigma * 13 * 1E9) * (flux_multiplier * n_devices); the single
/// combined scale factor keeps environment/deployment scaling bit-exact.
ProjectionRow project(const std::string& subject, double sigma_device_cm2,
                      const Environment& env, const Deployment& dep,
                      MeanTimeTo::Kind kind = MeanTimeTo::Kind::failure);

/// Two rows per application: the All variant (critical + tolerable + hang)
/// and the C+H variant (tolerable omitted). Breakdowns are expected at the
/// NYC sea-level reference flux.
std::vector<ProjectionRow> mttf_table(
    const std::vector<std::pair<std::string, ErrorRateBreakdown>>& breakdowns,
    const Environment& env, const Deployment& dep);

/// The three deployment presets used throughout the reports:
/// (sea level, 1), (40k feet, 1), (sea level, 1000 nodes).
std::vector<std::pair<Environment, Deployment>> projection_presets();

std::vector<ProjectionRow> preset_rows(const std::string& subject, double sigma_device_cm2,
                                       MeanTimeTo::Kind kind);

/// Preset rows derived from a configured base mean time (sea level, one
/// node) instead of a cross-section; months scale exactly by the preset
/// divisors 500 and 1000.
std::vector<ProjectionRow> preset_rows_from_base(const std::string& subject,
                                                 double base_months, MeanTimeTo::Kind kind);

struct RatioReport {
    /// MTTF(C+H) / MTTF(All): gain from disregarding tolerable errors.
    struct VariantImprovement {
        std::string subject;
        double mttf_ratio = 0;
    };
    /// 1 - MTTF(subject)/MTTF(reference), same variant; only emitted when
    /// the subject is the worse of the pair.
    struct PairDegradation {
        std::string subject;
        std::string reference;
        RateVariant variant = RateVariant::all;
        double fraction = 0;
    };
    /// mean MTTF(All) of a subject group vs. one other subject.
    struct GroupComparison {
        std::string group_label;
        std::string reference_subject;
        double mean_mttf_ratio = 0;
    };

    std::vector<VariantImprovement> improvements;
    std::vector<PairDegradation> degradations;
    std::vector<GroupComparison> group_comparisons;
};

/// Pairwise MTTF ratios and percentage degradations over rows sharing one
/// environment and deployment. Rows with no observed failures are excluded
/// from ratios. Ratios are environment-invariant (the flux cancels).
RatioReport ratio_report(const std::vector<ProjectionRow>& rows,
                         const std::vector<std::string>& sw_only_subjects = {});

} // namespace radrel
