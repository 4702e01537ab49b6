// afdmim_main.cpp - command line front end: sweep, theory, demo, compare
#include "afdmim/channel.hpp"
#include "afdmim/config_io.hpp"
#include "afdmim/daft.hpp"
#include "afdmim/im_codec.hpp"
#include "afdmim/rng.hpp"
#include "afdmim/sim.hpp"

#include "CLI11.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace afdmim;

struct CommonOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<double> rho;
  std::optional<std::string> detector;
  std::optional<std::string> scheme;
};

void add_common(CLI::App* sub, CommonOptions& opt) {
  sub->add_option("--config", opt.config, "configuration file")->required();
  sub->add_option("--out", opt.out, "output path (default: stdout)");
  sub->add_option("--seed", opt.seed, "master RNG seed override");
  sub->add_option("--workers", opt.workers, "worker thread count override");
  sub->add_option("--rho", opt.rho, "gain estimation error weight override");
  sub->add_option("--detector", opt.detector, "detector override (ml, mmse_ml, mmse_hard)");
  sub->add_option("--scheme", opt.scheme, "scheme override (afdm_im, afdm, ofdm, ofdm_im)");
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<ConfigEntry> overrides_from(const CommonOptions& opt) {
  std::vector<ConfigEntry> out;
  if (opt.seed) out.emplace_back("seed", std::to_string(*opt.seed));
  if (opt.workers) out.emplace_back("workers", std::to_string(*opt.workers));
  if (opt.rho) out.emplace_back("rho", format_double(*opt.rho));
  if (opt.detector) out.emplace_back("detector", *opt.detector);
  if (opt.scheme) out.emplace_back("scheme", *opt.scheme);
  return out;
}

template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream os(path);
  if (!os) throw std::invalid_argument("cannot open output file: " + path);
  fn(os);
}

void print_bits(std::ostream& os, const std::vector<std::uint8_t>& bits, int group_bits) {
  for (std::size_t t = 0; t < bits.size(); ++t) {
    if (t > 0 && group_bits > 0 && t % static_cast<std::size_t>(group_bits) == 0) os << ' ';
    os << static_cast<int>(bits[t]);
  }
}

void print_cvec(std::ostream& os, const char* label, const CVec& v) {
  os << label << ":";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << ' ' << v[i];
  os << '\n';
}

void print_groups(std::ostream& os, const Frame& frame) {
  for (std::size_t g = 0; g < frame.groups.size(); ++g) {
    const GroupContent& content = frame.groups[g];
    os << "  group " << g << ": active slots {";
    for (std::size_t i = 0; i < content.active_slots.size(); ++i) {
      if (i > 0) os << ',';
      os << content.active_slots[i];
    }
    os << "}, symbol indices {";
    for (std::size_t i = 0; i < content.symbol_indices.size(); ++i) {
      if (i > 0) os << ',';
      os << content.symbol_indices[i];
    }
    os << "}\n";
  }
}

int cmd_sweep(const CommonOptions& opt) {
  const RunSpec spec = make_run_spec(load_config_file(opt.config), overrides_from(opt));
  if (spec.sweep.snr_db_list.empty()) {
    throw std::invalid_argument("config sets no snr points");
  }
  const SweepResult result = run_sweep(spec.sweep);
  with_output(opt.out, [&](std::ostream& os) { write_sweep_csv(os, result); });
  return 0;
}

int cmd_theory(const CommonOptions& opt) {
  const RunSpec spec = make_run_spec(load_config_file(opt.config), overrides_from(opt));
  if (spec.sweep.snr_db_list.empty()) {
    throw std::invalid_argument("config sets no snr points");
  }
  const std::vector<TheoryPoint> curve =
      theory_curve(spec.sweep.frame, spec.sweep.channel, spec.sweep.snr_db_list,
                   spec.pep_mode, spec.csi_penalty, spec.sweep.allow_no_index_bits());
  with_output(opt.out, [&](std::ostream& os) { write_theory_csv(os, curve); });
  return 0;
}

int cmd_compare(const CommonOptions& opt) {
  const std::vector<std::pair<std::string, RunSpec>> specs =
      make_compare_specs(load_config_file(opt.config), overrides_from(opt));
  const std::vector<double>& snr = specs.front().second.sweep.snr_db_list;
  if (snr.empty()) throw std::invalid_argument("config sets no snr points");
  for (const auto& [label, spec] : specs) {
    if (spec.sweep.snr_db_list != snr) {
      throw std::invalid_argument("section '" + label +
                                  "' does not share the global snr list");
    }
  }
  std::vector<SweepResult> results;
  results.reserve(specs.size());
  for (const auto& [label, spec] : specs) results.push_back(run_sweep(spec.sweep));
  with_output(opt.out, [&](std::ostream& os) {
    os << "snr_db";
    for (const auto& [label, spec] : specs) os << ',' << label;
    os << '\n';
    for (std::size_t i = 0; i < snr.size(); ++i) {
      os << format_double(snr[i]);
      for (const SweepResult& result : results) {
        os << ',' << format_double(result.records[i].ber_total);
      }
      os << '\n';
    }
  });
  return 0;
}

int cmd_demo(const CommonOptions& opt) {
  const RunSpec spec = make_run_spec(load_config_file(opt.config), overrides_from(opt));
  const SweepConfig& cfg = spec.sweep;
  const double snr_db = cfg.snr_db_list.empty() ? 15.0 : cfg.snr_db_list.front();
  const bool allow = cfg.allow_no_index_bits();
  const BitBudget budget = bit_budget(cfg.frame, allow);
  const double gamma = std::pow(10.0, snr_db / 10.0);
  const double noise_var = budget.eb() / gamma;

  Rng rng(derive_stream(cfg.seed, std::bit_cast<std::uint64_t>(snr_db), 0));
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(budget.total_bits));
  for (std::uint8_t& b : bits) b = rng.bit();
  const Frame frame = encode_frame(bits, cfg.frame, allow);
  PathSet paths = sample_paths(cfg.channel, rng);
  paths.csi_gains = corrupt_csi(paths, cfg.channel.csi_error, rng);
  const EffectiveChannel eff = effective_channel(paths, cfg.frame);
  const DaftOperator op = build_daft(cfg.frame.num_subsymbols, cfg.frame.c1, cfg.frame.c2);
  const CVec time_samples = idaft(op, frame.daf_symbols);
  const CVec y = transmit_daf_domain(frame.daf_symbols, eff.true_matrix, noise_var, rng);
  const DetectorWorkspace ws = build_detector(cfg.frame, cfg.detector, allow);
  const std::vector<std::uint8_t> decided = detect_frame(y, eff.csi_matrix, gamma, ws);
  const Frame decided_frame = encode_frame(decided, cfg.frame, allow);
  int errors = 0;
  for (std::size_t t = 0; t < bits.size(); ++t) errors += bits[t] != decided[t];

  with_output(opt.out, [&](std::ostream& os) {
    os << std::setprecision(4);
    os << "scheme = " << scheme_name(cfg.scheme) << ", detector = "
       << detector_name(cfg.detector) << ", snr_db = " << snr_db
       << ", seed = " << cfg.seed << '\n';
    os << "bits per frame = " << budget.total_bits << " (" << budget.index_bits
       << " index + " << budget.symbol_bits << " symbol per group), eb = "
       << budget.eb_num << '/' << budget.eb_den << '\n';
    os << "source bits: ";
    print_bits(os, bits, budget.group_bits());
    os << '\n';
    print_groups(os, frame);
    print_cvec(os, "daf symbols", frame.daf_symbols);
    print_cvec(os, "time samples", time_samples);
    for (std::size_t i = 0; i < paths.paths.size(); ++i) {
      const Path& path = paths.paths[i];
      os << "path " << i << ": delay " << path.delay << ", doppler " << path.doppler
         << ", gain " << path.gain << ", receiver estimate "
         << paths.csi_gains[static_cast<Eigen::Index>(i)] << '\n';
    }
    print_cvec(os, "received", y);
    os << "detected bits: ";
    print_bits(os, decided, budget.group_bits());
    os << '\n';
    print_groups(os, decided_frame);
    os << "bit errors: " << errors << " of " << budget.total_bits << '\n';
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"affine frequency division multiplexing with index modulation"};
  app.require_subcommand(1);

  CommonOptions sweep_opt;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Monte-Carlo BER sweep to CSV");
  add_common(sweep_cmd, sweep_opt);

  CommonOptions theory_opt;
  CLI::App* theory_cmd =
      app.add_subcommand("theory", "closed-form error bound curve to CSV");
  add_common(theory_cmd, theory_opt);

  CommonOptions demo_opt;
  CLI::App* demo_cmd = app.add_subcommand("demo", "single-frame transceiver trace");
  add_common(demo_cmd, demo_opt);

  CommonOptions compare_opt;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "run every config section, one BER column each");
  add_common(compare_cmd, compare_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_opt);
    if (theory_cmd->parsed()) return cmd_theory(theory_opt);
    if (demo_cmd->parsed()) return cmd_demo(demo_opt);
    if (compare_cmd->parsed()) return cmd_compare(compare_opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
