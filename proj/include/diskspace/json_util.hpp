#pragma once

#include <complex>
#include <filesystem>
#include <string>

#include "json.hpp"

namespace diskspace {

using json = nlohmann::json;

/// {"re": x, "im": y}
json complex_to_json(std::complex<double> z);
/// Accepts {"re": x, "im": y} (either key optional) or a bare number.
std::complex<double> complex_from_json(const json& j);

/// Reads and parses a JSON file; throws ParseError.
json read_json_file(const std::filesystem::path& path);

/// Writes `contents` to `path` through a temporary file and a rename, so a
/// failed run never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace diskspace
