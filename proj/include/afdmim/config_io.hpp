// config_io.hpp - flat key=value run configuration files
//
// Grammar: one "key = value" per line, '#' starts a comment, blank lines are
// ignored. An optional "[name]" section header starts a per-scheme block used
// by multi-scheme comparisons; keys before the first header are global and
// apply to every section. Later occurrences of a key win. c1 and c2 accept
// the literal "auto" to request the scheme defaults; snr accepts either a
// comma list ("0,5,10") or an inclusive range "start:step:stop".
#pragma once

#include "afdmim/sim.hpp"

#include <string>
#include <utility>
#include <vector>

namespace afdmim {

using ConfigEntry = std::pair<std::string, std::string>;

struct ConfigSection {
  std::string name;  // empty for the global block
  std::vector<ConfigEntry> entries;
};

struct ConfigDocument {
  ConfigSection global;
  std::vector<ConfigSection> sections;
};

ConfigDocument parse_config_text(const std::string& text);
ConfigDocument load_config_file(const std::string& path);

// A fully resolved run: the sweep setup plus the bound-evaluation choices.
struct RunSpec {
  SweepConfig sweep;
  PepMode pep_mode = PepMode::det_form;
  CsiPenalty csi_penalty = CsiPenalty::rho_linear;
};

// Resolves one flat entry list: defaults filled in, frame geometry inferred
// from any two of frame_size / group_size / num_groups, scheme conventions
// applied, and the result validated. Unknown keys are rejected.
RunSpec resolve_run_spec(const std::vector<ConfigEntry>& entries);

// Global entries plus overrides; section blocks are ignored.
RunSpec make_run_spec(const ConfigDocument& doc, const std::vector<ConfigEntry>& overrides);

// One labeled spec per section, each resolved from global entries, the
// section's entries, then the overrides. A section without an explicit
// scheme key takes its scheme from the section name. A document with no
// sections yields the single global spec.
std::vector<std::pair<std::string, RunSpec>> make_compare_specs(
    const ConfigDocument& doc, const std::vector<ConfigEntry>& overrides);

std::vector<double> parse_snr_list(const std::string& text);

}  // namespace afdmim
