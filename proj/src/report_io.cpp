#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sll/errors.hpp"
#include "sll/harness.hpp"

namespace sll {

namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot files are written in native little-endian order");

constexpr char kMagic[4] = {'S', 'L', 'L', '1'};

void put_number(std::string& out, double x) {
    if (std::isnan(x)) {
        out += "nan";
        return;
    }
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    out.append(buf, ptr);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << content;
}

nlohmann::json number_or_null(double x) {
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

}  // namespace

std::string format_csv(const CsvTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out += ',';
        out += table.header[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            put_number(out, row[i]);
        }
        out += '\n';
    }
    return out;
}

nlohmann::json make_report(const ExperimentResult& result, const ExperimentConfig& cfg,
                           const std::string& timestamp) {
    nlohmann::json j;
    j["experiment"] = to_string(result.experiment);
    j["pass"] = result.pass();
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : result.checks) {
        checks.push_back({{"name", c.name},
                          {"pass", c.pass},
                          {"gating", c.gating},
                          {"measured", number_or_null(c.measured)},
                          {"threshold", number_or_null(c.threshold)},
                          {"se", number_or_null(c.se)},
                          {"detail", c.detail}});
    }
    j["checks"] = checks;
    for (const auto& [key, value] : result.summary.items()) j[key] = value;
    nlohmann::json files = nlohmann::json::array();
    for (const auto& t : result.tables) files.push_back(t.filename);
    j["csv"] = files;
    j["config"] = format_config(cfg);
    j["timestamp"] = timestamp;
    return j;
}

void write_outputs(const ExperimentResult& result, const ExperimentConfig& cfg,
                   const std::string& dir, const std::string& timestamp) {
    const std::filesystem::path base(dir);
    std::filesystem::create_directories(base);
    for (const auto& t : result.tables) write_file(base / t.filename, format_csv(t));
    if (!result.snapshots.empty()) {
        write_snapshots((base / "snapshots.bin").string(), result.snapshots, cfg.n_interior);
    }
    write_file(base / "report.json", make_report(result, cfg, timestamp).dump(2) + "\n");
}

void write_snapshots(const std::string& path, const std::vector<InteriorField>& fields,
                     std::size_t n_interior) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    const auto n = static_cast<std::uint32_t>(n_interior);
    const auto count = static_cast<std::uint64_t>(fields.size());
    f.write(kMagic, 4);
    f.write(reinterpret_cast<const char*>(&n), sizeof n);
    f.write(reinterpret_cast<const char*>(&count), sizeof count);
    for (const auto& u : fields) {
        if (u.size() != n_interior) throw DimensionError("snapshot length differs from n_interior");
        f.write(reinterpret_cast<const char*>(u.data()),
                static_cast<std::streamsize>(u.size() * sizeof(double)));
    }
}

std::vector<InteriorField> read_snapshots(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path);
    char magic[4];
    std::uint32_t n = 0;
    std::uint64_t count = 0;
    f.read(magic, 4);
    f.read(reinterpret_cast<char*>(&n), sizeof n);
    f.read(reinterpret_cast<char*>(&count), sizeof count);
    if (!f || std::memcmp(magic, kMagic, 4) != 0) {
        throw std::runtime_error(path + ": not a snapshot file");
    }
    std::vector<InteriorField> out(count, InteriorField(n));
    for (auto& u : out) {
        f.read(reinterpret_cast<char*>(u.data()), static_cast<std::streamsize>(n * sizeof(double)));
    }
    if (!f) throw std::runtime_error(path + ": truncated snapshot file");
    return out;
}

}  // namespace sll
