#pragma once

#include <optional>

#include "radrel/errors.hpp"

namespace radrel {

// Report-level constant: Julian month.
inline constexpr double kHoursPerMonth = 730.5;

// FIT is expressed per 1E9 device-hours.
inline constexpr double kFitReferenceHours = 1e9;

// JESD89 reference atmospheric-neutron flux (>=10 MeV), NYC at sea level.
inline constexpr double kNycSeaLevelFlux = 13.0; // n/cm^2/h

/// Neutron flux in n/cm^2 per hour.
class Flux {
public:
    explicit Flux(double n_per_cm2_hour) : value_(n_per_cm2_hour) {
        if (value_ < 0) throw ValidationError("flux must be non-negative");
    }
    double per_cm2_hour() const { return value_; }

private:
    double value_;
};

/// Accumulated neutron fluence in n/cm^2.
class Fluence {
public:
    explicit Fluence(double n_per_cm2) : value_(n_per_cm2) {
        if (value_ < 0) throw ValidationError("fluence must be non-negative");
    }
    static Fluence from_exposure(Flux flux, double hours) {
        if (hours < 0) throw ValidationError("exposure time must be non-negative");
        return Fluence(flux.per_cm2_hour() * hours);
    }
    double n_per_cm2() const { return value_; }

private:
    double value_;
};

/// Failures (or upsets) per 1E9 device-hours. Additive across independent
/// categories and across devices. A zero value means "no failures observed"
/// and is rendered as "-" by the reporting layer.
class FitRate {
public:
    FitRate() : value_(0) {}
    explicit FitRate(double failures_per_1e9_hours) : value_(failures_per_1e9_hours) {
        if (value_ < 0) throw ValidationError("FIT rate must be non-negative");
    }
    double value() const { return value_; }
    bool none_observed() const { return value_ == 0; }

    // Exact multiplicative scaling (used by environment / deployment projection).
    FitRate scaled(double factor) const { return FitRate(value_ * factor); }

    friend FitRate operator+(FitRate a, FitRate b) { return FitRate(a.value_ + b.value_); }

private:
    double value_;
};

/// Mean time to upset (MTTU) or failure (MTTF).
struct MeanTimeTo {
    enum class Kind { upset, failure };

    double hours = 0;
    Kind kind = Kind::failure;

    double months() const { return hours / kHoursPerMonth; }
};

/// FIT = sigma * flux * 1E9.
FitRate fit_from_cross_section(double sigma_device_cm2, Flux flux);

/// hours = 1E9 / FIT. Returns nullopt for FIT = 0 ("no observed failures")
/// instead of producing an infinity.
std::optional<MeanTimeTo> mean_time_from_fit(FitRate fit, MeanTimeTo::Kind kind);

} // namespace radrel
