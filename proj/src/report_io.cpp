#include "fwdint/report_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fwdint {

namespace {

namespace fs = std::filesystem;

std::string format17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_atomically(const fs::path& target, const std::string& content) {
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, target);
}

} // namespace

void emit_report(const RunReport& report, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    nlohmann::ordered_json j;
    j["schema_version"] = report.schema_version;
    j["kind"] = report.kind;
    j["replicates"] = report.replicates;
    j["wall_clock_ms"] = report.wall_clock_ms;
    j["config"] = report.config_echo;
    auto& records = j["records"] = nlohmann::ordered_json::array();
    for (const auto& rec : report.records) {
        nlohmann::ordered_json r;
        r["replicate"] = rec.replicate;
        r["stream"] = rec.stream;
        auto& entries = r["entries"] = nlohmann::ordered_json::array();
        for (const auto& e : rec.entries) {
            nlohmann::ordered_json je;
            je["n"] = e.n;
            je["error_norm"] = e.error_norm;
            if (e.has_v_norm)
                je["v_norm"] = e.v_norm;
            else
                je["v_norm"] = nullptr;
            je["flags"] = e.flags;
            entries.push_back(std::move(je));
        }
        records.push_back(std::move(r));
    }
    auto& summaries = j["summaries"] = nlohmann::ordered_json::array();
    for (const auto& s : report.summaries) {
        nlohmann::ordered_json js;
        js["n"] = s.n;
        js["median"] = s.median;
        js["mean"] = s.mean;
        js["q10"] = s.q10;
        js["q90"] = s.q90;
        js["count"] = s.count;
        summaries.push_back(std::move(js));
    }
    write_atomically(dir / "run.json", j.dump(2) + "\n");

    std::ostringstream errors_csv;
    errors_csv << "replicate,n,error_norm,v_norm,flags\n";
    for (const auto& rec : report.records)
        for (const auto& e : rec.entries) {
            errors_csv << rec.replicate << ',' << e.n << ',' << format17(e.error_norm) << ',';
            if (e.has_v_norm) errors_csv << format17(e.v_norm);
            errors_csv << ',' << e.flags << '\n';
        }
    write_atomically(dir / "errors.csv", errors_csv.str());

    std::ostringstream summary_csv;
    summary_csv << "n,median,mean,q10,q90,count\n";
    for (const auto& s : report.summaries)
        summary_csv << s.n << ',' << format17(s.median) << ',' << format17(s.mean) << ','
                    << format17(s.q10) << ',' << format17(s.q90) << ',' << s.count << '\n';
    write_atomically(dir / "summary.csv", summary_csv.str());

    std::ostringstream plot;
    for (const auto& s : report.summaries)
        plot << s.n << ' ' << format17(s.median) << '\n';
    write_atomically(dir / "plot.dat", plot.str());
}

} // namespace fwdint
