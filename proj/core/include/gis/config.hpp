#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "gis/engine.hpp"

namespace gis {

/// Flat key/value configuration. Text form: one `key = value` per line,
/// `#` starts a comment. Recognised keys:
///
///   model, iterations, min_diameter, input_grid, mode, N, delta,
///   include_face_points, samples_per_dim, bloat, workers, batch_size,
///   analysis, output_dir, edges_at, and model parameters such as
///   cstr.q or linear.a (see model_defaults()).
///
/// List values (input_grid, edges_at) are comma separated.
using ConfigMap = std::map<std::string, std::string>;

struct Settings {
  RunConfig run;
  std::string output_dir = "gis_out";
  std::vector<std::size_t> edges_at;  // iterations whose edge list is exported
};

/// Thrown for bad keys or values; what() starts with the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& key, const std::string& message);
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

ConfigMap parse_config(std::istream& is);
ConfigMap parse_config_file(const std::string& path);

/// Applies entries on top of `base`. Later maps win when called repeatedly.
void apply_config(Settings& settings, const ConfigMap& entries);

/// Effective configuration, every key present, in a stable order. Feeding
/// the output back through parse_config/apply_config yields the same Settings.
std::string serialize_config(const Settings& settings);

std::vector<std::size_t> parse_count_list(const std::string& key, const std::string& text);

}  // namespace gis
