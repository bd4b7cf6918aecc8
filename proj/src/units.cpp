#include "radrel/units.hpp"

namespace radrel {

FitRate fit_from_cross_section(double sigma_device_cm2, Flux flux) {
    if (sigma_device_cm2 < 0) throw ValidationError("cross-section must be non-negative");
    return FitRate(sigma_device_cm2 * flux.per_cm2_hour() * kFitReferenceHours);
}

std::optional<MeanTimeTo> mean_time_from_fit(FitRate fit, MeanTimeTo::Kind kind) {
    if (fit.none_observed()) return std::nullopt;
    return MeanTimeTo{kFitReferenceHours / fit.value(), kind};
}

} // namespace radrel
