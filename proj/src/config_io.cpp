// config_io.cpp - flat key=value run configuration files
#include "afdmim/config_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace afdmim {
namespace {

std::string trim(const std::string& s) {
  std::size_t first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  std::size_t last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

double to_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw std::invalid_argument("config key '" + key + "': not a number: " + value);
  }
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw std::invalid_argument("config key '" + key + "': not a count: " + value);
  }
  return out;
}

int to_int(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  int out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw std::invalid_argument("config key '" + key + "': not an integer: " + value);
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("config key '" + key + "': not a boolean: " + value);
}

PepMode parse_pep_mode(const std::string& name) {
  if (name == "det_form") return PepMode::det_form;
  if (name == "high_snr") return PepMode::high_snr;
  throw std::invalid_argument("unknown pep_mode: " + name);
}

CsiPenalty parse_csi_penalty(const std::string& name) {
  if (name == "rho_linear") return CsiPenalty::rho_linear;
  if (name == "rho_squared") return CsiPenalty::rho_squared;
  throw std::invalid_argument("unknown csi_penalty: " + name);
}

}  // namespace

ConfigDocument parse_config_text(const std::string& text) {
  ConfigDocument doc;
  ConfigSection* current = &doc.global;
  std::istringstream stream(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(stream, raw)) {
    ++lineno;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": unterminated section header");
      }
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) {
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": empty section name");
      }
      doc.sections.push_back({name, {}});
      current = &doc.sections.back();
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    }
    current->entries.emplace_back(key, value);
  }
  return doc;
}

ConfigDocument load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::vector<double> parse_snr_list(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const std::vector<std::string> parts = split(text, ':');
    if (parts.size() != 3) {
      throw std::invalid_argument("snr range must be start:step:stop, got: " + text);
    }
    const double start = to_double("snr", parts[0]);
    const double step = to_double("snr", parts[1]);
    const double stop = to_double("snr", parts[2]);
    if (step <= 0) throw std::invalid_argument("snr range step must be positive");
    for (int i = 0;; ++i) {
      const double value = start + i * step;
      if (value > stop + step * 1e-9) break;
      out.push_back(value);
    }
    return out;
  }
  for (const std::string& part : split(text, ',')) {
    out.push_back(to_double("snr", part));
  }
  return out;
}

RunSpec resolve_run_spec(const std::vector<ConfigEntry>& entries) {
  std::map<std::string, std::string> kv;
  for (const ConfigEntry& entry : entries) kv[entry.first] = entry.second;
  const auto take = [&kv](const char* key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string value = it->second;
    kv.erase(it);
    return value;
  };

  RunSpec spec;
  SweepConfig& cfg = spec.sweep;
  if (const auto v = take("scheme")) cfg.scheme = parse_scheme(*v);
  if (const auto v = take("detector")) cfg.detector = parse_detector(*v);
  if (const auto v = take("grouping")) cfg.frame.grouping = parse_grouping(*v);

  int frame_size = 0;
  int group_size = 0;
  int num_groups = 0;
  int active = 0;
  if (const auto v = take("frame_size")) frame_size = to_int("frame_size", *v);
  if (const auto v = take("group_size")) group_size = to_int("group_size", *v);
  if (const auto v = take("num_groups")) num_groups = to_int("num_groups", *v);
  if (const auto v = take("active_per_group")) active = to_int("active_per_group", *v);
  cfg.frame.psk_order = 4;
  if (const auto v = take("psk_order")) cfg.frame.psk_order = to_int("psk_order", *v);

  double c1 = std::numeric_limits<double>::quiet_NaN();
  double c2 = std::numeric_limits<double>::quiet_NaN();
  if (const auto v = take("c1"); v && *v != "auto") c1 = to_double("c1", *v);
  if (const auto v = take("c2"); v && *v != "auto") c2 = to_double("c2", *v);

  cfg.channel.num_paths = 2;
  cfg.channel.max_delay = 1;
  cfg.channel.max_doppler = 1;
  if (const auto v = take("paths")) cfg.channel.num_paths = to_int("paths", *v);
  if (const auto v = take("max_delay")) cfg.channel.max_delay = to_int("max_delay", *v);
  if (const auto v = take("max_doppler")) cfg.channel.max_doppler = to_int("max_doppler", *v);
  if (const auto v = take("rho")) cfg.channel.csi_error = to_double("rho", *v);

  if (const auto v = take("snr")) cfg.snr_db_list = parse_snr_list(*v);
  if (const auto v = take("min_trials")) cfg.stop.min_trials = to_u64("min_trials", *v);
  if (const auto v = take("min_bit_errors")) cfg.stop.min_bit_errors = to_u64("min_bit_errors", *v);
  if (const auto v = take("max_trials")) cfg.stop.max_trials = to_u64("max_trials", *v);
  if (const auto v = take("seed")) cfg.seed = to_u64("seed", *v);
  if (const auto v = take("workers")) cfg.workers = to_int("workers", *v);
  if (const auto v = take("cpp_check")) cfg.cpp_check = to_bool("cpp_check", *v);
  if (const auto v = take("pep_mode")) spec.pep_mode = parse_pep_mode(*v);
  if (const auto v = take("csi_penalty")) spec.csi_penalty = parse_csi_penalty(*v);
  if (!kv.empty()) {
    throw std::invalid_argument("unknown config key: " + kv.begin()->first);
  }

  if (scheme_has_index_bits(cfg.scheme)) {
    if (frame_size == 0 && group_size > 0 && num_groups > 0) {
      frame_size = group_size * num_groups;
    }
    if (group_size == 0 && frame_size > 0 && num_groups > 0) {
      if (frame_size % num_groups != 0) {
        throw std::invalid_argument("frame_size is not divisible by num_groups");
      }
      group_size = frame_size / num_groups;
    }
    if (num_groups == 0 && frame_size > 0 && group_size > 0) {
      if (frame_size % group_size != 0) {
        throw std::invalid_argument("frame_size is not divisible by group_size");
      }
      num_groups = frame_size / group_size;
    }
    if (frame_size == 0 || group_size == 0 || num_groups == 0) {
      throw std::invalid_argument(
          "frame geometry needs two of frame_size, group_size, num_groups");
    }
    if (active == 0) {
      throw std::invalid_argument(
          "active_per_group is required for index-modulated schemes");
    }
  } else {
    if (frame_size == 0) {
      if (group_size > 0 && num_groups > 0) {
        frame_size = group_size * num_groups;
      } else {
        throw std::invalid_argument("frame_size is required");
      }
    }
  }
  cfg.frame.num_subsymbols = frame_size;
  cfg.frame.group_size = group_size;
  cfg.frame.active_per_group = active;
  cfg.frame.num_groups = num_groups;

  apply_scheme_defaults(cfg, c1, c2);
  cfg.frame.validate();
  cfg.channel.validate();
  bit_budget(cfg.frame, cfg.allow_no_index_bits());
  return spec;
}

RunSpec make_run_spec(const ConfigDocument& doc, const std::vector<ConfigEntry>& overrides) {
  std::vector<ConfigEntry> entries = doc.global.entries;
  entries.insert(entries.end(), overrides.begin(), overrides.end());
  return resolve_run_spec(entries);
}

std::vector<std::pair<std::string, RunSpec>> make_compare_specs(
    const ConfigDocument& doc, const std::vector<ConfigEntry>& overrides) {
  std::vector<std::pair<std::string, RunSpec>> specs;
  if (doc.sections.empty()) {
    RunSpec spec = make_run_spec(doc, overrides);
    specs.emplace_back(scheme_name(spec.sweep.scheme), spec);
    return specs;
  }
  for (const ConfigSection& section : doc.sections) {
    std::vector<ConfigEntry> entries = doc.global.entries;
    const bool has_scheme =
        std::any_of(section.entries.begin(), section.entries.end(),
                    [](const ConfigEntry& e) { return e.first == "scheme"; });
    if (!has_scheme) entries.emplace_back("scheme", section.name);
    entries.insert(entries.end(), section.entries.begin(), section.entries.end());
    entries.insert(entries.end(), overrides.begin(), overrides.end());
    specs.emplace_back(section.name, resolve_run_spec(entries));
  }
  return specs;
}

}  // namespace afdmim
