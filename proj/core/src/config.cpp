#include "gis/config.hpp"

#include <fstream>
#include <istream>
#include <sstream>

namespace gis {

ConfigError::ConfigError(const std::string& key, const std::string& message)
    : std::invalid_argument(key + ": " + message), key_(key) {}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::size_t to_count(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    if (!text.empty() && text[0] == '-') throw std::invalid_argument(text);
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a nonnegative integer, got '" + text + "'");
  }
}

double to_real(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + text + "'");
  }
}

bool to_flag(const std::string& key, const std::string& text) {
  if (text == "true" || text == "on" || text == "1") return true;
  if (text == "false" || text == "off" || text == "0") return false;
  throw ConfigError(key, "expected true or false, got '" + text + "'");
}

std::string join(const std::vector<std::size_t>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + std::to_string(values[i]);
  return s;
}

bool is_model_key(const std::string& key) { return key.find('.') != std::string::npos; }

}  // namespace

std::vector<std::size_t> parse_count_list(const std::string& key, const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_count(key, item));
  }
  return out;
}

ConfigMap parse_config(std::istream& is) {
  ConfigMap out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

ConfigMap parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config", "cannot open '" + path + "'");
  return parse_config(is);
}

void apply_config(Settings& settings, const ConfigMap& entries) {
  RunConfig& rc = settings.run;
  // Model first: switching models drops parameters of the previous one.
  if (auto it = entries.find("model"); it != entries.end() && it->second != rc.model) {
    try {
      model_defaults(it->second);
    } catch (const std::invalid_argument&) {
      throw ConfigError("model", "unknown model '" + it->second + "'");
    }
    rc.model = it->second;
    rc.model_params.clear();
  }
  for (const auto& [key, value] : entries) {
    if (key == "model") continue;
    if (key == "iterations") rc.iterations = to_count(key, value);
    else if (key == "min_diameter") rc.min_diameter = to_real(key, value);
    else if (key == "input_grid") rc.input_grid = parse_count_list(key, value);
    else if (key == "mode") {
      try {
        rc.adaptive.mode = parse_subdivision_mode(value);
      } catch (const std::invalid_argument&) {
        throw ConfigError(key, "expected full or adaptive, got '" + value + "'");
      }
    }
    else if (key == "N") rc.adaptive.N = to_count(key, value);
    else if (key == "delta") rc.adaptive.delta = to_real(key, value);
    else if (key == "include_face_points") rc.adaptive.include_face_points = to_flag(key, value);
    else if (key == "samples_per_dim") rc.image.samples_per_dim = to_count(key, value);
    else if (key == "bloat") rc.image.bloat = to_real(key, value);
    else if (key == "workers") rc.build.workers = to_count(key, value);
    else if (key == "batch_size") rc.build.batch_size = to_count(key, value);
    else if (key == "analysis") {
      if (value == "all_cycles") rc.analysis = NonLeavingMode::all_cycles;
      else if (value == "largest_only") rc.analysis = NonLeavingMode::largest_only;
      else throw ConfigError(key, "expected all_cycles or largest_only, got '" + value + "'");
    }
    else if (key == "output_dir") settings.output_dir = value;
    else if (key == "edges_at") settings.edges_at = parse_count_list(key, value);
    else if (is_model_key(key)) {
      const auto known = model_defaults(rc.model);
      if (!known.contains(key)) throw ConfigError(key, "not a parameter of model '" + rc.model + "'");
      rc.model_params[key] = value;
    } else {
      throw ConfigError(key, "unknown configuration key");
    }
  }
  try {
    rc.validate();
    (void)make_model(rc.model, rc.model_params);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    const auto colon = what.find(':');
    throw ConfigError(colon == std::string::npos ? "config" : what.substr(0, colon),
                      colon == std::string::npos ? what : trim(what.substr(colon + 1)));
  }
}

std::string serialize_config(const Settings& settings) {
  const RunConfig& rc = settings.run;
  std::ostringstream os;
  os << "model = " << rc.model << '\n';
  os << "iterations = " << rc.iterations << '\n';
  os << "min_diameter = " << format_real(rc.min_diameter) << '\n';
  os << "input_grid = " << join(rc.input_grid) << '\n';
  os << "mode = " << to_string(rc.adaptive.mode) << '\n';
  os << "N = " << rc.adaptive.N << '\n';
  os << "delta = " << format_real(rc.adaptive.delta) << '\n';
  os << "include_face_points = " << (rc.adaptive.include_face_points ? "true" : "false") << '\n';
  os << "samples_per_dim = " << rc.image.samples_per_dim << '\n';
  os << "bloat = " << format_real(rc.image.bloat) << '\n';
  os << "workers = " << rc.build.workers << '\n';
  os << "batch_size = " << rc.build.batch_size << '\n';
  os << "analysis = " << (rc.analysis == NonLeavingMode::all_cycles ? "all_cycles" : "largest_only") << '\n';
  os << "output_dir = " << settings.output_dir << '\n';
  os << "edges_at = " << join(settings.edges_at) << '\n';
  auto params = model_defaults(rc.model);
  for (const auto& [k, v] : rc.model_params) params[k] = v;
  for (const auto& [k, v] : params) os << k << " = " << v << '\n';
  return os.str();
}

}  // namespace gis
