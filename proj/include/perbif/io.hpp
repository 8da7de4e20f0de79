#pragma once

#include <filesystem>
#include <span>
#include <string>

#include <json.hpp>

#include "perbif/cycles.hpp"
#include "perbif/paramspace.hpp"

namespace perbif {

using json = nlohmann::json;

/// Thrown for malformed configuration or input files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// [re, im]
json to_json(cplx z);
/// Accepts [re, im], a plain number or {"re": .., "im": ..}.
cplx complex_from_json(const json& j);

/// {"d": d, "c": [[re, im], ...], "a": [re, im]}
json to_json(const ParamPoint& p);
/// c may be omitted for d = 2; validates the result.
ParamPoint param_from_json(const json& j);

json to_json(const MultiplierSpectrum& s);
json to_json(const CycleRecord& c);
json to_json(const SliceSpec& s);
SliceSpec slice_from_json(const json& j, int d);
json to_json(const PernReport& r);
json to_json(const EquidistReport& r);
json to_json(const LyapunovEstimate& e);

/// Table with columns n, l1_error, count, mass (one row per period). The
/// runtime column is left out so reruns compare byte for byte.
std::string equidist_csv(std::span<const EquidistReport> reports);

/// Serializes with every double printed at 17 significant digits and keys
/// sorted; non-finite numbers become null.
std::string dump(const json& j, int indent = 2);

/// <prefix>.bin (raw little-endian doubles, row-major) and <prefix>.json
/// (slice, kind, level, masses, mask as a run-length list).
void write_field(const GridField& f, const std::filesystem::path& prefix);
GridField read_field(const std::filesystem::path& prefix);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// FNV-1a 64 of dump(j) as 16 hex digits; object keys are sorted first so
/// the hash ignores key order.
std::string config_hash(const json& j);

}  // namespace perbif
