#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "radrel/geometry.hpp"
#include "radrel/sim.hpp"
#include "radrel/stats.hpp"

namespace radrel {

/// Measured memory array bundled with a device profile. The printed
/// cross-sections are carried verbatim next to the raw event count and
/// fluence they were derived from.
struct MemoryEntry {
    MemoryGeometry geometry;
    std::uint64_t events = 0;
    double fluence_n_per_cm2 = 0;
    double sigma_bit_cm2 = 0;
    double sigma_device_cm2 = 0;   // 0 when the source only reports per-bit
    double ci_low_bit_cm2 = 0;     // printed 95% bounds, when reported
    double ci_high_bit_cm2 = 0;
    std::uint64_t sefi_count = 0;
    std::string shape_distribution; // key into DeviceProfile::shape_distributions
    std::string source;
    std::string notes;

    double sigma_device_effective() const {
        return sigma_device_cm2 > 0 ? sigma_device_cm2
                                    : sigma_bit_cm2 * double(geometry.total_bits);
    }
};

struct ApplicationEntry {
    std::string name;
    std::string kind; // "sw-only" | "sw-hw"
    CategoryCounts counts;
    double fluence_n_per_cm2 = 0;
    std::string source;
    std::string notes;

    CampaignLog to_log() const;
};

struct DeviceProfile {
    std::string name;
    std::string description;
    bool authoritative = true;
    std::vector<MemoryEntry> memories;
    std::map<std::string, ShapeDistribution> shape_distributions;
    std::vector<ApplicationEntry> applications;
    // Configured base cache MTTU (sea level, one node), in months; 0 = unset.
    double cache_mttu_base_months = 0;
    std::map<std::string, std::string> metadata;

    const MemoryEntry* find_memory(const std::string& name) const;
    const ApplicationEntry* find_application(const std::string& name) const;

    /// Arrays prepared for the simulator; empty selection = all memories.
    std::vector<SimArray> sim_arrays(const std::vector<std::string>& names = {}) const;

    std::vector<std::string> sw_only_application_names() const;

    void validate() const;
};

DeviceProfile load_profile_file(const std::filesystem::path& path);
void save_profile(const DeviceProfile& profile, const std::filesystem::path& path);

/// Profile search order: $RADREL_PROFILE_DIR, ./profiles, then the bundled
/// directory configured at build time.
std::vector<std::filesystem::path> profile_search_dirs();
std::filesystem::path find_profile_path(const std::string& name);
DeviceProfile load_profile(const std::string& name);

} // namespace radrel
