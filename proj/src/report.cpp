#include "radrel/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "radrel/errors.hpp"

namespace radrel {

using nlohmann::json;
using nlohmann::ordered_json;

Format format_from_string(const std::string& s) {
    if (s == "json") return Format::json;
    if (s == "md" || s == "markdown") return Format::md;
    if (s == "csv") return Format::csv;
    throw ValidationError("unknown output format: " + s);
}

namespace {

std::string human(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string cell_text(const ReportTable::Cell& c, bool lossless) {
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    if (std::holds_alternative<std::int64_t>(c)) return std::to_string(std::get<std::int64_t>(c));
    return lossless ? full(std::get<double>(c)) : human(std::get<double>(c));
}

} // namespace

ordered_json Report::to_json() const {
    ordered_json j;
    j["command"] = command;
    j["input_digest"] = input_digest;
    j["provenance"] = provenance;
    j["notes"] = notes;
    j["tables"] = ordered_json::array();
    for (const ReportTable& t : tables) {
        ordered_json jt;
        jt["name"] = t.name;
        jt["title"] = t.title;
        jt["columns"] = t.columns;
        jt["rows"] = ordered_json::array();
        for (const auto& row : t.rows) {
            ordered_json jr = ordered_json::array();
            for (const auto& c : row) {
                if (std::holds_alternative<std::string>(c))
                    jr.push_back(std::get<std::string>(c));
                else if (std::holds_alternative<std::int64_t>(c))
                    jr.push_back(std::get<std::int64_t>(c));
                else
                    jr.push_back(std::get<double>(c));
            }
            jt["rows"].push_back(std::move(jr));
        }
        j["tables"].push_back(std::move(jt));
    }
    return j;
}

Report Report::from_json(const json& j) {
    try {
        Report r;
        r.command = j.at("command").get<std::string>();
        r.input_digest = j.value("input_digest", "");
        if (j.contains("provenance"))
            for (const auto& [k, v] : j.at("provenance").items())
                r.provenance.emplace(k, v.get<std::string>());
        for (const json& n : j.value("notes", json::array()))
            r.notes.push_back(n.get<std::string>());
        for (const json& jt : j.value("tables", json::array())) {
            ReportTable t;
            t.name = jt.at("name").get<std::string>();
            t.title = jt.value("title", "");
            for (const json& c : jt.at("columns")) t.columns.push_back(c.get<std::string>());
            for (const json& jr : jt.at("rows")) {
                std::vector<ReportTable::Cell> row;
                for (const json& c : jr) {
                    if (c.is_string())
                        row.emplace_back(c.get<std::string>());
                    else if (c.is_number_integer() || c.is_number_unsigned())
                        row.emplace_back(c.get<std::int64_t>());
                    else
                        row.emplace_back(c.get<double>());
                }
                t.rows.push_back(std::move(row));
            }
            r.tables.push_back(std::move(t));
        }
        return r;
    } catch (const json::exception& e) {
        throw InputFormatError("report JSON has an unexpected structure: " + std::string(e.what()));
    }
}

std::string Report::to_markdown() const {
    std::ostringstream out;
    out << "# " << command << "\n\n";
    if (!provenance.empty()) {
        for (const auto& [k, v] : provenance) out << "- " << k << ": " << v << "\n";
        out << "\n";
    }
    for (const ReportTable& t : tables) {
        out << "## " << (t.title.empty() ? t.name : t.title) << "\n\n";
        out << "|";
        for (const auto& c : t.columns) out << " " << c << " |";
        out << "\n|";
        for (std::size_t i = 0; i < t.columns.size(); ++i) out << " --- |";
        out << "\n";
        for (const auto& row : t.rows) {
            out << "|";
            for (const auto& c : row) out << " " << cell_text(c, false) << " |";
            out << "\n";
        }
        out << "\n";
    }
    if (!notes.empty()) {
        out << "## Notes\n\n";
        for (const auto& n : notes) out << "- " << n << "\n";
    }
    return out.str();
}

namespace {

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    quoted += '"';
    return quoted;
}

} // namespace

std::string Report::to_csv() const {
    std::ostringstream out;
    for (const ReportTable& t : tables) {
        out << "# table " << t.name << "\n";
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            out << (i ? "," : "") << csv_quote(t.columns[i]);
        out << "\n";
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out << (i ? "," : "") << csv_quote(cell_text(row[i], true));
            out << "\n";
        }
    }
    return out.str();
}

std::string Report::render(Format format) const {
    switch (format) {
        case Format::json: return to_json().dump(2) + "\n";
        case Format::md: return to_markdown();
        case Format::csv: return to_csv();
    }
    return {};
}

const ReportTable* Report::find_table(const std::string& name) const {
    for (const ReportTable& t : tables)
        if (t.name == name) return &t;
    return nullptr;
}

std::string fnv1a64_hex(std::span<const std::uint8_t> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string digest_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputFormatError("cannot open file: " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return fnv1a64_hex(bytes);
}

namespace {

CampaignLog log_from_json_object(const json& j, double fluence_override) {
    CampaignLog log;
    try {
        log.benchmark = j.at("benchmark").get<std::string>();
        double fluence = j.value("fluence_n_per_cm2", 0.0);
        if (fluence_override > 0) fluence = fluence_override;
        if (fluence <= 0)
            throw ValidationError("campaign log '" + log.benchmark + "' needs a positive fluence");
        log.fluence = Fluence(fluence);
        if (j.contains("flux_during_test_n_per_cm2_hour"))
            log.flux_during_test = Flux(j.at("flux_during_test_n_per_cm2_hour").get<double>());

        const json& counts = j.at("counts");
        CategoryCounts c;
        c.runs = counts.contains("runs") ? counts.at("runs").get<std::uint64_t>()
                                         : j.at("runs").get<std::uint64_t>();
        c.tolerable_sdc = counts.value("tolerable_sdc", std::uint64_t(0));
        c.critical_sdc = counts.value("critical_sdc", std::uint64_t(0));
        c.crash_recoverable = counts.value("crash_recoverable", std::uint64_t(0));
        c.crash_soft_persistent = counts.value("crash_soft_persistent", std::uint64_t(0));
        c.timeout = counts.value("timeout", std::uint64_t(0));
        const std::uint64_t errors = c.error_total();
        if (errors > c.runs)
            throw ValidationError("campaign log '" + log.benchmark +
                                  "': error counts exceed total runs");
        c.correct = counts.contains("correct") ? counts.at("correct").get<std::uint64_t>()
                                               : c.runs - errors;
        c.validate();
        log.counts = c;
        return log;
    } catch (const json::exception& e) {
        throw InputFormatError("campaign log JSON has an unexpected structure: " +
                               std::string(e.what()));
    }
}

std::vector<CampaignLog> logs_from_csv(const std::filesystem::path& path, double fluence_override) {
    std::ifstream in(path);
    if (!in) throw InputFormatError("cannot open file: " + path.string());

    struct Partial {
        CategoryCounts counts;
        double fluence = 0;
        bool runs_seen = false;
        bool correct_seen = false;
    };
    std::vector<std::string> order;
    std::map<std::string, Partial> partials;

    std::string line;
    std::uint64_t offset = 0;
    while (std::getline(in, line)) {
        const std::uint64_t line_offset = offset;
        offset += line.size() + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (line == "benchmark,category,count") continue; // optional header
        std::istringstream row(line);
        std::string benchmark, category, count_text;
        if (!std::getline(row, benchmark, ',') || !std::getline(row, category, ',') ||
            !std::getline(row, count_text))
            throw InputFormatError("campaign CSV row needs 'benchmark,category,count'", line_offset);
        if (!partials.contains(benchmark)) order.push_back(benchmark);
        Partial& p = partials[benchmark];
        double value = 0;
        try {
            value = std::stod(count_text);
        } catch (const std::exception&) {
            throw InputFormatError("campaign CSV count is not a number: " + count_text, line_offset);
        }
        if (category == "fluence_n_per_cm2") {
            p.fluence = value;
            continue;
        }
        if (value < 0 || value != double(std::uint64_t(value)))
            throw InputFormatError("campaign CSV count must be a non-negative integer", line_offset);
        const auto n = std::uint64_t(value);
        if (category == "runs") {
            p.counts.runs = n;
            p.runs_seen = true;
        } else if (category == "correct") {
            p.counts.correct = n;
            p.correct_seen = true;
        } else {
            switch (run_result_from_string(category)) {
                case RunResult::correct: break;
                case RunResult::tolerable_sdc: p.counts.tolerable_sdc = n; break;
                case RunResult::critical_sdc: p.counts.critical_sdc = n; break;
                case RunResult::crash_recoverable: p.counts.crash_recoverable = n; break;
                case RunResult::crash_soft_persistent: p.counts.crash_soft_persistent = n; break;
                case RunResult::timeout: p.counts.timeout = n; break;
            }
        }
    }
    if (partials.empty()) throw InputFormatError("campaign CSV holds no rows", offset);

    std::vector<CampaignLog> logs;
    for (const std::string& name : order) {
        Partial p = partials.at(name);
        if (!p.runs_seen)
            throw ValidationError("campaign CSV benchmark '" + name + "' is missing a runs row");
        const std::uint64_t errors = p.counts.error_total();
        if (errors > p.counts.runs)
            throw ValidationError("campaign log '" + name + "': error counts exceed total runs");
        if (!p.correct_seen) p.counts.correct = p.counts.runs - errors;
        p.counts.validate();
        double fluence = fluence_override > 0 ? fluence_override : p.fluence;
        if (fluence <= 0)
            throw ValidationError("campaign log '" + name + "' needs a positive fluence");
        CampaignLog log;
        log.benchmark = name;
        log.counts = p.counts;
        log.fluence = Fluence(fluence);
        logs.push_back(std::move(log));
    }
    return logs;
}

} // namespace

std::vector<CampaignLog> load_campaign_logs(const std::filesystem::path& path,
                                            double fluence_override) {
    if (path.extension() == ".csv") return logs_from_csv(path, fluence_override);

    std::ifstream in(path);
    if (!in) throw InputFormatError("cannot open file: " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputFormatError("campaign log is not valid JSON: " + std::string(e.what()),
                               std::uint64_t(e.byte));
    }
    std::vector<CampaignLog> logs;
    if (j.is_array())
        for (const json& item : j) logs.push_back(log_from_json_object(item, fluence_override));
    else
        logs.push_back(log_from_json_object(j, fluence_override));
    return logs;
}

} // namespace radrel
