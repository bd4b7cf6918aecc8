#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "radrel/profile.hpp"
#include "radrel/projection.hpp"
#include "radrel/readback.hpp"
#include "radrel/sim.hpp"

namespace radrel {

enum class Format { json, md, csv };

Format format_from_string(const std::string& s);

struct ReportTable {
    using Cell = std::variant<std::string, double, std::int64_t>;

    std::string name; // stable section id
    std::string title;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// Structured output of a CLI command. Every printed number is produced by a
/// library operation; serialisation to JSON is lossless so a re-ingested
/// report reproduces identical values.
struct Report {
    std::string command;
    std::string input_digest; // fnv1a-64 of the input bytes, hex
    std::map<std::string, std::string> provenance;
    std::vector<ReportTable> tables;
    std::vector<std::string> notes;

    nlohmann::ordered_json to_json() const;
    static Report from_json(const nlohmann::json& j);
    std::string to_markdown() const;
    std::string to_csv() const;
    std::string render(Format format) const;

    const ReportTable* find_table(const std::string& name) const;
};

std::string fnv1a64_hex(std::span<const std::uint8_t> bytes);
std::string digest_file(const std::filesystem::path& path);

// --- command drivers (shared between the CLI and the tests) -----------------

struct GlobalOptions {
    double confidence = 0.95;
    bool fluence_uncertainty = false;
    std::uint64_t seed = 1;
    Format format = Format::json;
};

struct AnalyzeReadbackArgs {
    std::vector<std::filesystem::path> containers;
    // Pre-diffed CSV alternative; requires the geometry/fluence fields below.
    std::filesystem::path diff_csv;
    std::uint32_t frames = 0;
    std::uint32_t bits_per_frame = 0;
    std::uint64_t block_bits = 0;
    std::string kind = "cram";
    double fluence = 0;
    std::uint32_t config_period = 0;
    std::string name = "memory";
    std::uint32_t sefi_threshold_bits = 16;
};

Report cmd_analyze_readback(const AnalyzeReadbackArgs& args, const GlobalOptions& opt);

struct XsectionArgs {
    std::filesystem::path log_path;
    double flux = kNycSeaLevelFlux;
    double fluence_override = 0; // for CSV inputs without a fluence row
};

Report cmd_xsection(const XsectionArgs& args, const GlobalOptions& opt);

Report cmd_project(const DeviceProfile& profile, const Environment& env, Deployment dep,
                   const GlobalOptions& opt, const std::string& profile_digest = "");

struct SimulateArgs {
    std::filesystem::path config_path;
    std::uint64_t seed_override = 0; // 0 = use the config seed
};

Report cmd_simulate(const SimulateArgs& args, const GlobalOptions& opt);

Report cmd_report(const DeviceProfile& profile, const GlobalOptions& opt,
                  const std::string& profile_digest = "");

/// Campaign-log ingestion (JSON object, JSON array, or CSV rows
/// `benchmark,category,count`).
std::vector<CampaignLog> load_campaign_logs(const std::filesystem::path& path,
                                            double fluence_override = 0);

} // namespace radrel
