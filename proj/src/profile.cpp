#include "radrel/profile.hpp"

#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "radrel/errors.hpp"

#ifndef RADREL_BUNDLED_PROFILE_DIR
#define RADREL_BUNDLED_PROFILE_DIR ""
#endif

namespace radrel {

using nlohmann::json;

CampaignLog ApplicationEntry::to_log() const {
    CampaignLog log;
    log.benchmark = name;
    log.counts = counts;
    log.fluence = Fluence(fluence_n_per_cm2);
    return log;
}

const MemoryEntry* DeviceProfile::find_memory(const std::string& mem_name) const {
    for (const MemoryEntry& m : memories)
        if (m.geometry.name == mem_name) return &m;
    return nullptr;
}

const ApplicationEntry* DeviceProfile::find_application(const std::string& app_name) const {
    for (const ApplicationEntry& a : applications)
        if (a.name == app_name) return &a;
    return nullptr;
}

std::vector<SimArray> DeviceProfile::sim_arrays(const std::vector<std::string>& names) const {
    std::vector<SimArray> arrays;
    auto add = [&](const MemoryEntry& m) {
        SimArray a;
        a.name = m.geometry.name;
        a.geometry = m.geometry;
        a.sigma_bit_cm2 = m.sigma_bit_cm2;
        if (!m.shape_distribution.empty()) {
            auto it = shape_distributions.find(m.shape_distribution);
            if (it == shape_distributions.end())
                throw ValidationError("profile '" + name + "' references unknown shape distribution '" +
                                      m.shape_distribution + "'");
            a.shapes = it->second;
        } else {
            a.shapes = ShapeDistribution::single_bit_only();
        }
        arrays.push_back(std::move(a));
    };
    if (names.empty()) {
        for (const MemoryEntry& m : memories) add(m);
    } else {
        for (const std::string& n : names) {
            const MemoryEntry* m = find_memory(n);
            if (m == nullptr)
                throw ValidationError("profile '" + name + "' has no memory named '" + n + "'");
            add(*m);
        }
    }
    return arrays;
}

std::vector<std::string> DeviceProfile::sw_only_application_names() const {
    std::vector<std::string> names;
    for (const ApplicationEntry& a : applications)
        if (a.kind == "sw-only") names.push_back(a.name);
    return names;
}

void DeviceProfile::validate() const {
    if (name.empty()) throw ValidationError("a device profile needs a name");
    for (const MemoryEntry& m : memories) {
        m.geometry.validate();
        if (m.sigma_bit_cm2 < 0 || m.sigma_device_cm2 < 0)
            throw ValidationError("profile cross-sections must be non-negative");
        if (m.fluence_n_per_cm2 < 0)
            throw ValidationError("profile fluence must be non-negative");
    }
    for (const auto& [key, dist] : shape_distributions) {
        if (key.empty()) throw ValidationError("shape distribution keys must be non-empty");
        dist.validate();
    }
    for (const ApplicationEntry& a : applications) {
        a.counts.validate();
        if (a.fluence_n_per_cm2 <= 0)
            throw ValidationError("application '" + a.name + "' needs a positive fluence");
    }
}

namespace {

ShapeDistribution shape_distribution_from_json(const json& j) {
    std::vector<ShapeDistribution::Entry> entries;
    for (const json& item : j) {
        ShapeDistribution::Entry e;
        e.label = item.value("label", "");
        e.raw_percent = item.at("percent").get<double>();
        std::vector<std::pair<std::uint32_t, std::uint32_t>> offsets;
        for (const json& off : item.at("offsets"))
            offsets.emplace_back(off.at(0).get<std::uint32_t>(), off.at(1).get<std::uint32_t>());
        e.shape = ShapeSignature::from_offsets(std::move(offsets));
        entries.push_back(std::move(e));
    }
    return ShapeDistribution::from_raw_percentages(std::move(entries));
}

json shape_distribution_to_json(const ShapeDistribution& d) {
    json out = json::array();
    for (const auto& e : d.entries) {
        json offsets = json::array();
        for (const auto& [f, b] : e.shape.offsets) offsets.push_back({f, b});
        out.push_back({{"label", e.label}, {"percent", e.raw_percent}, {"offsets", offsets}});
    }
    return out;
}

CategoryCounts counts_from_json(const json& j, std::uint64_t runs) {
    CategoryCounts c;
    c.runs = runs;
    c.correct = j.value("correct", std::uint64_t(0));
    c.tolerable_sdc = j.value("tolerable_sdc", std::uint64_t(0));
    c.critical_sdc = j.value("critical_sdc", std::uint64_t(0));
    c.crash_recoverable = j.value("crash_recoverable", std::uint64_t(0));
    c.crash_soft_persistent = j.value("crash_soft_persistent", std::uint64_t(0));
    c.timeout = j.value("timeout", std::uint64_t(0));
    return c;
}

} // namespace

DeviceProfile load_profile_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputFormatError("cannot open profile: " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputFormatError("profile is not valid JSON: " + std::string(e.what()),
                               std::uint64_t(e.byte));
    }

    try {
        DeviceProfile p;
        p.name = j.at("name").get<std::string>();
        p.description = j.value("description", "");
        p.authoritative = j.value("authoritative", true);
        p.cache_mttu_base_months = j.value("cache_mttu_base_months", 0.0);

        if (j.contains("shape_distributions"))
            for (const auto& [key, value] : j.at("shape_distributions").items())
                p.shape_distributions.emplace(key, shape_distribution_from_json(value));

        for (const json& jm : j.value("memories", json::array())) {
            MemoryEntry m;
            m.geometry.name = jm.at("name").get<std::string>();
            m.geometry.kind = memory_kind_from_string(jm.at("kind").get<std::string>());
            m.geometry.frame_count = jm.at("frame_count").get<std::uint32_t>();
            m.geometry.bits_per_frame = jm.at("bits_per_frame").get<std::uint32_t>();
            m.geometry.total_bits =
                std::uint64_t(m.geometry.frame_count) * m.geometry.bits_per_frame;
            m.geometry.block_bits = jm.value("block_bits", std::uint64_t(0));
            m.events = jm.value("events", std::uint64_t(0));
            m.fluence_n_per_cm2 = jm.value("fluence_n_per_cm2", 0.0);
            m.sigma_bit_cm2 = jm.value("sigma_bit_cm2", 0.0);
            m.sigma_device_cm2 = jm.value("sigma_device_cm2", 0.0);
            m.ci_low_bit_cm2 = jm.value("ci_low_bit_cm2", 0.0);
            m.ci_high_bit_cm2 = jm.value("ci_high_bit_cm2", 0.0);
            m.sefi_count = jm.value("sefi_count", std::uint64_t(0));
            m.shape_distribution = jm.value("shape_distribution", "");
            m.source = jm.value("source", "");
            m.notes = jm.value("notes", "");
            p.memories.push_back(std::move(m));
        }

        for (const json& ja : j.value("applications", json::array())) {
            ApplicationEntry a;
            a.name = ja.at("name").get<std::string>();
            a.kind = ja.value("kind", "sw-only");
            a.counts = counts_from_json(ja.at("counts"), ja.at("runs").get<std::uint64_t>());
            a.fluence_n_per_cm2 = ja.at("fluence_n_per_cm2").get<double>();
            a.source = ja.value("source", "");
            a.notes = ja.value("notes", "");
            p.applications.push_back(std::move(a));
        }

        if (j.contains("metadata"))
            for (const auto& [key, value] : j.at("metadata").items())
                p.metadata.emplace(key, value.is_string() ? value.get<std::string>() : value.dump());

        p.validate();
        return p;
    } catch (const json::exception& e) {
        throw InputFormatError("profile JSON has an unexpected structure: " + std::string(e.what()));
    }
}

void save_profile(const DeviceProfile& profile, const std::filesystem::path& path) {
    profile.validate();
    nlohmann::ordered_json j;
    j["name"] = profile.name;
    j["description"] = profile.description;
    j["authoritative"] = profile.authoritative;
    if (profile.cache_mttu_base_months > 0)
        j["cache_mttu_base_months"] = profile.cache_mttu_base_months;
    j["memories"] = nlohmann::ordered_json::array();
    for (const MemoryEntry& m : profile.memories) {
        nlohmann::ordered_json jm;
        jm["name"] = m.geometry.name;
        jm["kind"] = to_string(m.geometry.kind);
        jm["frame_count"] = m.geometry.frame_count;
        jm["bits_per_frame"] = m.geometry.bits_per_frame;
        jm["block_bits"] = m.geometry.block_bits;
        jm["events"] = m.events;
        jm["fluence_n_per_cm2"] = m.fluence_n_per_cm2;
        jm["sigma_bit_cm2"] = m.sigma_bit_cm2;
        if (m.sigma_device_cm2 > 0) jm["sigma_device_cm2"] = m.sigma_device_cm2;
        if (m.ci_low_bit_cm2 > 0) jm["ci_low_bit_cm2"] = m.ci_low_bit_cm2;
        if (m.ci_high_bit_cm2 > 0) jm["ci_high_bit_cm2"] = m.ci_high_bit_cm2;
        jm["sefi_count"] = m.sefi_count;
        if (!m.shape_distribution.empty()) jm["shape_distribution"] = m.shape_distribution;
        if (!m.source.empty()) jm["source"] = m.source;
        if (!m.notes.empty()) jm["notes"] = m.notes;
        j["memories"].push_back(std::move(jm));
    }
    j["shape_distributions"] = nlohmann::ordered_json::object();
    for (const auto& [key, dist] : profile.shape_distributions)
        j["shape_distributions"][key] = shape_distribution_to_json(dist);
    j["applications"] = nlohmann::ordered_json::array();
    for (const ApplicationEntry& a : profile.applications) {
        nlohmann::ordered_json ja;
        ja["name"] = a.name;
        ja["kind"] = a.kind;
        ja["runs"] = a.counts.runs;
        ja["counts"] = {{"correct", a.counts.correct},
                        {"tolerable_sdc", a.counts.tolerable_sdc},
                        {"critical_sdc", a.counts.critical_sdc},
                        {"crash_recoverable", a.counts.crash_recoverable},
                        {"crash_soft_persistent", a.counts.crash_soft_persistent},
                        {"timeout", a.counts.timeout}};
        ja["fluence_n_per_cm2"] = a.fluence_n_per_cm2;
        if (!a.source.empty()) ja["source"] = a.source;
        if (!a.notes.empty()) ja["notes"] = a.notes;
        j["applications"].push_back(std::move(ja));
    }
    j["metadata"] = profile.metadata;

    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ValidationError("cannot write profile: " + path.string());
    out << j.dump(2) << "\n";
}

std::vector<std::filesystem::path> profile_search_dirs() {
    std::vector<std::filesystem::path> dirs;
    if (const char* env = std::getenv("RADREL_PROFILE_DIR"); env != nullptr && *env != '\0')
        dirs.emplace_back(env);
    dirs.emplace_back("profiles");
    const std::string bundled = RADREL_BUNDLED_PROFILE_DIR;
    if (!bundled.empty()) dirs.emplace_back(bundled);
    return dirs;
}

std::filesystem::path find_profile_path(const std::string& name) {
    for (const std::filesystem::path& dir : profile_search_dirs()) {
        const std::filesystem::path candidate = dir / (name + ".json");
        std::error_code ec;
        if (std::filesystem::exists(candidate, ec)) return candidate;
    }
    throw ValidationError("profile '" + name + "' not found in the profile search path");
}

DeviceProfile load_profile(const std::string& name) {
    return load_profile_file(find_profile_path(name));
}

} // namespace radrel
