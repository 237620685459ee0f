#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace loglab::detail {

using Json = nlohmann::ordered_json;

// One CSV cell: numbers are printed with %.17g, so artifacts round-trip exactly.
using Cell = std::variant<double, long long, std::string>;

std::string format_double(double x);

class ArtifactWriter {
public:
    ArtifactWriter(std::filesystem::path dir, std::string config_hash);

    const std::filesystem::path& dir() const noexcept { return dir_; }
    const std::vector<std::string>& written() const noexcept { return written_; }

    // First line is a comment carrying the tool version and config hash.
    void write_csv(const std::string& name, const std::vector<std::string>& columns,
                   const std::vector<std::vector<Cell>>& rows);

    // Wraps `body` with tool/version/config_hash keys ahead of the payload.
    void write_json(const std::string& name, const Json& body);

private:
    void write_text(const std::string& name, const std::string& text);

    std::filesystem::path dir_;
    std::string hash_;
    std::vector<std::string> written_;
};

// JSON-safe number: non-finite values become strings ("inf", "-inf", "nan").
Json number(double x);

}  // namespace loglab::detail
