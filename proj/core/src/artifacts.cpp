#include "artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef LOGLAB_VERSION
#define LOGLAB_VERSION "unknown"
#endif

namespace loglab::detail {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Json number(double x) {
    if (std::isfinite(x)) return x;
    return format_double(x);
}

ArtifactWriter::ArtifactWriter(std::filesystem::path dir, std::string config_hash)
    : dir_(std::move(dir)), hash_(std::move(config_hash)) {
    std::filesystem::create_directories(dir_);
}

void ArtifactWriter::write_text(const std::string& name, const std::string& text) {
    const std::filesystem::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write artifact " + path.string());
    out << text;
    if (!out) throw std::runtime_error("failed writing artifact " + path.string());
    written_.push_back(name);
}

void ArtifactWriter::write_csv(const std::string& name, const std::vector<std::string>& columns,
                               const std::vector<std::vector<Cell>>& rows) {
    std::ostringstream os;
    os << "# loglab " << LOGLAB_VERSION << " config_hash=" << hash_ << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& row : rows) {
        if (row.size() != columns.size()) throw std::logic_error("write_csv: row width mismatch in " + name);
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            std::visit(
                [&os](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        os << format_double(v);
                    } else {
                        os << v;
                    }
                },
                row[i]);
        }
        os << '\n';
    }
    write_text(name, os.str());
}

void ArtifactWriter::write_json(const std::string& name, const Json& body) {
    Json j;
    j["tool"] = "loglab";
    j["version"] = LOGLAB_VERSION;
    j["config_hash"] = hash_;
    for (const auto& [key, value] : body.items()) j[key] = value;
    write_text(name, j.dump(2) + "\n");
}

}  // namespace loglab::detail
