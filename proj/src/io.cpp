#include "perbif/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace perbif {

namespace {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // keep doubles recognizable as reals on re-read
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void emit(const json& j, int indent, int level, std::string& out) {
  const auto pad = [&](int l) {
    if (indent > 0) {
      out += '\n';
      out.append(static_cast<std::size_t>(indent * l), ' ');
    }
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        pad(level + 1);
        out += json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        emit(it.value(), indent, level + 1, out);
      }
      pad(level);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // short numeric arrays ([re, im] pairs) stay on one line
      const bool flat = j.size() <= 2 && std::all_of(j.begin(), j.end(), [](const json& e) {
                          return e.is_number() || e.is_null();
                        });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) pad(level + 1);
        emit(e, indent, level + 1, out);
      }
      if (!flat) pad(level);
      out += ']';
      return;
    }
    case json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

double number(const json& j, const char* what) {
  if (j.is_null()) return std::nan("");
  if (!j.is_number()) throw ConfigError(std::string("expected a number for ") + what);
  return j.get<double>();
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json complex_list(std::span<const cplx> zs) {
  json a = json::array();
  for (cplx z : zs) a.push_back(to_json(z));
  return a;
}

}  // namespace

json to_json(cplx z) { return json::array({number_or_null(z.real()), number_or_null(z.imag())}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {number(j[0], "re"), number(j[1], "im")};
  if (j.is_object() && j.contains("re"))
    return {number(j.at("re"), "re"), j.contains("im") ? number(j.at("im"), "im") : 0.0};
  throw ConfigError("expected a complex number as [re, im], got " + j.dump());
}

json to_json(const ParamPoint& p) {
  return {{"d", p.d}, {"c", complex_list(p.c)}, {"a", to_json(p.a)}};
}

ParamPoint param_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("parameter must be an object {d, c, a}");
  if (!j.contains("d")) throw ConfigError("parameter is missing 'd'");
  if (!j.contains("a")) throw ConfigError("parameter is missing 'a'");
  if (!j.at("d").is_number_integer()) throw ConfigError("'d' must be an integer");
  const int d = j.at("d").get<int>();
  std::vector<cplx> c;
  if (j.contains("c")) {
    if (!j.at("c").is_array()) throw ConfigError("'c' must be a list of complex numbers");
    for (const auto& e : j.at("c")) c.push_back(complex_from_json(e));
  }
  try {
    return ParamPoint::make(d, std::move(c), complex_from_json(j.at("a")));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

json to_json(const MultiplierSpectrum& s) {
  return {{"d", s.d},
          {"n", s.n},
          {"generic", s.generic},
          {"size", s.lambda_values.size()},
          {"values", complex_list(s.lambda_values)},
          {"source", to_json(s.source)}};
}

json to_json(const CycleRecord& c) {
  return {{"representative", to_json(c.representative)},
          {"exact_period", c.exact_period},
          {"multiplier", to_json(c.multiplier)},
          {"multiplicity", c.multiplicity},
          {"points", complex_list(c.points)}};
}

json to_json(const SliceSpec& s) {
  return {{"d", s.d},
          {"base", to_json(s.base)},
          {"direction", to_json(s.direction)},
          {"center", to_json(s.center)},
          {"half_width", s.half_width},
          {"resolution", s.resolution}};
}

SliceSpec slice_from_json(const json& j, int d) {
  if (!j.is_object()) throw ConfigError("'slice' must be an object");
  SliceSpec s;
  s.d = j.value("d", d);
  if (j.contains("base")) {
    s.base = param_from_json(j.at("base"));
  } else {
    std::vector<cplx> c(static_cast<std::size_t>(std::max(0, s.d - 2)));
    s.base = ParamPoint::make(s.d, c, 0.0);
  }
  if (j.contains("direction")) {
    s.direction = param_from_json(j.at("direction"));
  } else {
    // default: move a only
    std::vector<cplx> c(static_cast<std::size_t>(std::max(0, s.d - 2)));
    s.direction = ParamPoint::make(s.d, c, 1.0);
  }
  if (j.contains("center")) s.center = complex_from_json(j.at("center"));
  if (j.contains("half_width")) s.half_width = number(j.at("half_width"), "half_width");
  if (j.contains("resolution")) {
    if (!j.at("resolution").is_number_integer())
      throw ConfigError("'resolution' must be an integer");
    s.resolution = j.at("resolution").get<int>();
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return s;
}

json to_json(const PernReport& r) {
  json roots = json::array();
  for (const auto& x : r.roots)
    roots.push_back(
        {{"t", to_json(x.t)}, {"multiplicity", x.multiplicity}, {"residual", number_or_null(x.residual)}});
  return {{"roots", roots},
          {"winding_total", r.winding_total},
          {"found_total", r.found_total},
          {"unresolved_blocks", r.unresolved_blocks},
          {"ok", r.ok},
          {"issues", r.issues}};
}

json to_json(const EquidistReport& r) {
  json l1 = json::array(), mass = json::array(), failed = json::array();
  for (double v : r.l1_errors) l1.push_back(number_or_null(v));
  for (double v : r.normalized_masses) mass.push_back(number_or_null(v));
  for (char f : r.failed) failed.push_back(f != 0);
  json roots = json::array();
  for (const auto& level : r.roots) {
    json a = json::array();
    for (const auto& x : level) a.push_back({{"t", to_json(x.t)}, {"multiplicity", x.multiplicity}});
    roots.push_back(a);
  }
  return {{"w", to_json(r.w)},
          {"periods", r.periods},
          {"l1_errors", l1},
          {"root_counts", r.root_counts},
          {"normalized_masses", mass},
          {"failed", failed},
          {"roots", roots},
          {"issues", r.issues},
          {"masked_pixels", r.masked_pixels},
          {"total_pixels", r.total_pixels}};
}

json to_json(const LyapunovEstimate& e) {
  const char* m = e.method == LyapunovMethod::repelling_cycles      ? "repelling_cycles"
                  : e.method == LyapunovMethod::equilibrium_measure ? "equilibrium_measure"
                                                                    : "critical_green";
  return {{"value", number_or_null(e.value)},
          {"method", m},
          {"order", e.order},
          {"error_hint", number_or_null(e.error_hint)}};
}

std::string equidist_csv(std::span<const EquidistReport> reports) {
  std::string out = "w_re,w_im,n,l1_error,count,mass,failed\n";
  for (const auto& r : reports) {
    for (std::size_t k = 0; k < r.periods.size(); ++k) {
      out += format_double(r.w.real()) + ',' + format_double(r.w.imag()) + ',';
      out += std::to_string(r.periods[k]) + ',';
      out += (std::isfinite(r.l1_errors[k]) ? format_double(r.l1_errors[k]) : "nan") + ',';
      out += std::to_string(r.root_counts[k]) + ',';
      out += (std::isfinite(r.normalized_masses[k]) ? format_double(r.normalized_masses[k]) : "nan");
      out += ',' + std::to_string(r.failed[k] ? 1 : 0) + '\n';
    }
  }
  return out;
}

std::string dump(const json& j, int indent) {
  std::string out;
  emit(j, indent, 0, out);
  out += '\n';
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void write_field(const GridField& f, const std::filesystem::path& prefix) {
  static_assert(std::endian::native == std::endian::little, "field files are little-endian");
  auto bin = prefix;
  bin += ".bin";
  if (bin.has_parent_path()) std::filesystem::create_directories(bin.parent_path());
  {
    std::ofstream out(bin, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + bin.string());
    out.write(reinterpret_cast<const char*>(f.values.data()),
              static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  }
  json mask = json::array();
  for (std::size_t i = 0; i < f.mask.size();) {
    if (!f.mask[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < f.mask.size() && f.mask[j]) ++j;
    mask.push_back({i, j - i});
    i = j;
  }
  json side = {{"slice", to_json(f.slice)},
               {"kind", to_string(f.kind)},
               {"n", f.n},
               {"w", to_json(f.w)},
               {"total_mass", f.total_mass},
               {"clamped_mass", f.clamped_mass},
               {"nan_count", f.nan_count},
               {"values_file", bin.filename().string()},
               {"layout", "row-major float64 little-endian, values[iy*resolution+ix]"},
               {"mask", mask}};
  auto js = prefix;
  js += ".json";
  write_text(js, dump(side));
}

GridField read_field(const std::filesystem::path& prefix) {
  auto js = prefix;
  js += ".json";
  json side;
  try {
    side = json::parse(read_text(js));
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("bad field sidecar: ") + e.what());
  }
  GridField f;
  f.slice = slice_from_json(side.at("slice"), side.at("slice").value("d", 2));
  f.kind = field_kind_from_string(side.at("kind").get<std::string>());
  f.n = side.value("n", 0);
  if (side.contains("w")) f.w = complex_from_json(side.at("w"));
  f.total_mass = side.value("total_mass", 0.0);
  f.clamped_mass = side.value("clamped_mass", 0.0);
  auto bin = prefix;
  bin += ".bin";
  const std::string raw = read_text(bin);
  if (raw.size() != f.slice.size() * sizeof(double))
    throw ConfigError("field file " + bin.string() + " does not match the slice resolution");
  f.values.resize(f.slice.size());
  std::memcpy(f.values.data(), raw.data(), raw.size());
  if (side.contains("mask") && !side.at("mask").empty()) {
    f.mask.assign(f.slice.size(), 0);
    for (const auto& run : side.at("mask")) {
      const auto start = run.at(0).get<std::size_t>(), len = run.at(1).get<std::size_t>();
      if (start + len > f.mask.size()) throw ConfigError("mask run out of range");
      std::fill_n(f.mask.begin() + static_cast<std::ptrdiff_t>(start), len, 1);
    }
  }
  f.count_nan();
  return f;
}

std::string config_hash(const json& j) {
  const std::string s = dump(j, 0);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace perbif
