// sim.cpp - Monte-Carlo BER sweep engine
#include "afdmim/sim.hpp"

#include "afdmim/channel.hpp"
#include "afdmim/im_codec.hpp"
#include "afdmim/rng.hpp"

#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace afdmim {
namespace {

// Frames are simulated in fixed blocks; the stop rule is evaluated only at
// block boundaries, so the trial count never depends on the worker count.
constexpr std::uint64_t kBlockFrames = 4096;

struct ErrorCounters {
  std::uint64_t total = 0;
  std::uint64_t index = 0;
  std::uint64_t mod = 0;

  void add(const ErrorCounters& other) {
    total += other.total;
    index += other.index;
    mod += other.mod;
  }
};

struct PointContext {
  const SweepConfig* cfg = nullptr;
  BitBudget budget;
  double gamma = 0.0;      // linear SNR, 10^(snr_db/10)
  double noise_var = 0.0;  // N0 = Eb / gamma
  std::uint64_t point_label = 0;
  bool allow_no_index_bits = false;
};

void check_time_domain(const Frame& frame, const PathSet& paths, const FrameConfig& fcfg,
                       const CMat& h_true, int cpp_len) {
  const CVec model = h_true * frame.daf_symbols;
  const CVec oracle = time_domain_oracle(frame.daf_symbols, paths, fcfg, cpp_len);
  const double rel = (oracle - model).norm() / std::max(model.norm(), 1e-30);
  if (rel > 1e-9) {
    throw std::runtime_error("time-domain cross-check failed: relative error " +
                             std::to_string(rel));
  }
}

// Simulates frames begin, begin+stride, ... below end, accumulating bit error
// counts. Every frame reseeds its own RNG stream from (seed, point, frame),
// so any partition of the frame indices yields the same totals.
void simulate_frames(const PointContext& ctx, const DetectorWorkspace& ws,
                     std::uint64_t begin, std::uint64_t end, std::uint64_t stride,
                     ErrorCounters& out) {
  const SweepConfig& cfg = *ctx.cfg;
  const FrameConfig& fcfg = cfg.frame;
  const int nbits = ctx.budget.total_bits;
  const int group_bits = ctx.budget.group_bits();
  const int index_bits = ctx.budget.index_bits;
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(nbits));
  CMat h_true(fcfg.num_subsymbols, fcfg.num_subsymbols);
  CMat h_csi(fcfg.num_subsymbols, fcfg.num_subsymbols);
  for (std::uint64_t f = begin; f < end; f += stride) {
    Rng rng(derive_stream(cfg.seed, ctx.point_label, f));
    for (int t = 0; t < nbits; ++t) bits[static_cast<std::size_t>(t)] = rng.bit();
    const Frame frame = encode_frame(bits, fcfg, ctx.allow_no_index_bits);
    PathSet paths = sample_paths(cfg.channel, rng);
    paths.csi_gains = corrupt_csi(paths, cfg.channel.csi_error, rng);
    build_effective(paths, fcfg, false, h_true);
    build_effective(paths, fcfg, true, h_csi);
    if (cfg.cpp_check && f < 8) {
      check_time_domain(frame, paths, fcfg, h_true, cfg.channel.max_delay);
    }
    const CVec y = transmit_daf_domain(frame.daf_symbols, h_true, ctx.noise_var, rng);
    const std::vector<std::uint8_t> decided = detect_frame(y, h_csi, ctx.gamma, ws);
    for (int t = 0; t < nbits; ++t) {
      if (decided[static_cast<std::size_t>(t)] != bits[static_cast<std::size_t>(t)]) {
        ++out.total;
        if (t % group_bits < index_bits) {
          ++out.index;
        } else {
          ++out.mod;
        }
      }
    }
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::afdm_im: return "afdm_im";
    case Scheme::afdm: return "afdm";
    case Scheme::ofdm: return "ofdm";
    case Scheme::ofdm_im: return "ofdm_im";
  }
  throw std::invalid_argument("unknown scheme value");
}

const char* detector_name(Detector d) {
  switch (d) {
    case Detector::ml: return "ml";
    case Detector::mmse_ml: return "mmse_ml";
    case Detector::mmse_hard: return "mmse_hard";
  }
  throw std::invalid_argument("unknown detector value");
}

const char* grouping_name(Grouping g) {
  switch (g) {
    case Grouping::localized: return "localized";
    case Grouping::distributed: return "distributed";
  }
  throw std::invalid_argument("unknown grouping value");
}

Scheme parse_scheme(const std::string& name) {
  if (name == "afdm_im") return Scheme::afdm_im;
  if (name == "afdm") return Scheme::afdm;
  if (name == "ofdm") return Scheme::ofdm;
  if (name == "ofdm_im") return Scheme::ofdm_im;
  throw std::invalid_argument("unknown scheme: " + name);
}

Detector parse_detector(const std::string& name) {
  if (name == "ml") return Detector::ml;
  if (name == "mmse_ml") return Detector::mmse_ml;
  if (name == "mmse_hard") return Detector::mmse_hard;
  throw std::invalid_argument("unknown detector: " + name);
}

Grouping parse_grouping(const std::string& name) {
  if (name == "localized") return Grouping::localized;
  if (name == "distributed") return Grouping::distributed;
  throw std::invalid_argument("unknown grouping: " + name);
}

bool scheme_has_index_bits(Scheme s) {
  return s == Scheme::afdm_im || s == Scheme::ofdm_im;
}

void apply_scheme_defaults(SweepConfig& cfg, double c1, double c2) {
  FrameConfig& f = cfg.frame;
  if (!scheme_has_index_bits(cfg.scheme)) {
    f.group_size = 1;
    f.active_per_group = 1;
    f.num_groups = f.num_subsymbols;
  }
  if (cfg.scheme == Scheme::ofdm || cfg.scheme == Scheme::ofdm_im) {
    f.c1 = 0.0;
    f.c2 = 0.0;
  } else {
    f.c1 = std::isnan(c1) ? full_diversity_c1(f.num_subsymbols, cfg.channel.max_doppler)
                          : c1;
    f.c2 = std::isnan(c2) ? kDefaultC2 : c2;
  }
}

BerRecord run_point(const SweepConfig& cfg, double snr_db) {
  cfg.frame.validate();
  cfg.channel.validate();
  PointContext ctx;
  ctx.cfg = &cfg;
  ctx.allow_no_index_bits = cfg.allow_no_index_bits();
  ctx.budget = bit_budget(cfg.frame, ctx.allow_no_index_bits);
  ctx.gamma = std::pow(10.0, snr_db / 10.0);
  ctx.noise_var = ctx.budget.eb() / ctx.gamma;
  ctx.point_label = std::bit_cast<std::uint64_t>(snr_db);
  const DetectorWorkspace ws = build_detector(cfg.frame, cfg.detector,
                                              ctx.allow_no_index_bits);
  const int workers = std::max(1, cfg.workers);
  const StopRule& stop = cfg.stop;

  std::uint64_t trials = 0;
  ErrorCounters totals;
  while (trials < stop.max_trials &&
         (trials < stop.min_trials || totals.total < stop.min_bit_errors)) {
    const std::uint64_t block = std::min(kBlockFrames, stop.max_trials - trials);
    if (workers == 1) {
      simulate_frames(ctx, ws, trials, trials + block, 1, totals);
    } else {
      std::vector<ErrorCounters> partial(static_cast<std::size_t>(workers));
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(workers));
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back(simulate_frames, std::cref(ctx), std::cref(ws),
                          trials + static_cast<std::uint64_t>(w), trials + block,
                          static_cast<std::uint64_t>(workers),
                          std::ref(partial[static_cast<std::size_t>(w)]));
      }
      for (std::thread& th : pool) th.join();
      for (const ErrorCounters& part : partial) totals.add(part);
    }
    trials += block;
  }

  BerRecord rec;
  rec.snr_db = snr_db;
  rec.trials = trials;
  rec.bit_errors_total = totals.total;
  rec.bit_errors_index = totals.index;
  rec.bit_errors_mod = totals.mod;
  const double frames = static_cast<double>(trials);
  const double index_per_frame = static_cast<double>(cfg.frame.num_groups) *
                                 static_cast<double>(ctx.budget.index_bits);
  const double mod_per_frame = static_cast<double>(cfg.frame.num_groups) *
                               static_cast<double>(ctx.budget.symbol_bits);
  rec.ber_total =
      static_cast<double>(totals.total) / (frames * static_cast<double>(ctx.budget.total_bits));
  rec.ber_index =
      index_per_frame > 0 ? static_cast<double>(totals.index) / (frames * index_per_frame) : 0.0;
  rec.ber_mod =
      mod_per_frame > 0 ? static_cast<double>(totals.mod) / (frames * mod_per_frame) : 0.0;
  rec.seed = cfg.seed;
  return rec;
}

SweepResult run_sweep(const SweepConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  SweepResult result;
  result.config_echo = config_echo(cfg);
  result.records.reserve(cfg.snr_db_list.size());
  for (double snr_db : cfg.snr_db_list) {
    result.records.push_back(run_point(cfg, snr_db));
  }
  const auto stop = std::chrono::steady_clock::now();
  result.wall_seconds = std::chrono::duration<double>(stop - start).count();
  return result;
}

std::vector<TheoryPoint> theory_curve(const FrameConfig& frame, const ChannelConfig& channel,
                                      const std::vector<double>& snr_db_list, PepMode mode,
                                      CsiPenalty penalty, bool allow_no_index_bits) {
  std::vector<TheoryPoint> curve;
  curve.reserve(snr_db_list.size());
  for (double snr_db : snr_db_list) {
    curve.push_back(
        {snr_db, abep_bound(frame, channel, snr_db, mode, penalty, allow_no_index_bits)});
  }
  return curve;
}

std::string config_echo(const SweepConfig& cfg) {
  std::ostringstream os;
  os << "scheme = " << scheme_name(cfg.scheme) << '\n';
  os << "detector = " << detector_name(cfg.detector) << '\n';
  os << "frame_size = " << cfg.frame.num_subsymbols << '\n';
  os << "group_size = " << cfg.frame.group_size << '\n';
  os << "active_per_group = " << cfg.frame.active_per_group << '\n';
  os << "num_groups = " << cfg.frame.num_groups << '\n';
  os << "psk_order = " << cfg.frame.psk_order << '\n';
  os << "grouping = " << grouping_name(cfg.frame.grouping) << '\n';
  os << "c1 = " << format_double(cfg.frame.c1) << '\n';
  os << "c2 = " << format_double(cfg.frame.c2) << '\n';
  os << "paths = " << cfg.channel.num_paths << '\n';
  os << "max_delay = " << cfg.channel.max_delay << '\n';
  os << "max_doppler = " << cfg.channel.max_doppler << '\n';
  os << "rho = " << format_double(cfg.channel.csi_error) << '\n';
  os << "snr = ";
  for (std::size_t i = 0; i < cfg.snr_db_list.size(); ++i) {
    if (i > 0) os << ',';
    os << format_double(cfg.snr_db_list[i]);
  }
  os << '\n';
  os << "min_trials = " << cfg.stop.min_trials << '\n';
  os << "min_bit_errors = " << cfg.stop.min_bit_errors << '\n';
  os << "max_trials = " << cfg.stop.max_trials << '\n';
  os << "seed = " << cfg.seed << '\n';
  os << "workers = " << cfg.workers << '\n';
  os << "cpp_check = " << (cfg.cpp_check ? "true" : "false") << '\n';
  return os.str();
}

void write_sweep_csv(std::ostream& os, const SweepResult& result, bool include_echo) {
  if (include_echo) {
    std::istringstream lines(result.config_echo);
    std::string line;
    while (std::getline(lines, line)) os << "# " << line << '\n';
    os << "# version = " << result.version << '\n';
    os << "# wall_seconds = " << format_double(result.wall_seconds) << '\n';
  }
  os << "snr_db,trials,bit_errors_total,bit_errors_index,bit_errors_mod,"
        "ber_total,ber_index,ber_mod\n";
  for (const BerRecord& rec : result.records) {
    os << format_double(rec.snr_db) << ',' << rec.trials << ',' << rec.bit_errors_total
       << ',' << rec.bit_errors_index << ',' << rec.bit_errors_mod << ','
       << format_double(rec.ber_total) << ',' << format_double(rec.ber_index) << ','
       << format_double(rec.ber_mod) << '\n';
  }
}

void write_theory_csv(std::ostream& os, const std::vector<TheoryPoint>& curve) {
  os << "snr_db,abep\n";
  for (const TheoryPoint& point : curve) {
    os << format_double(point.snr_db) << ',' << format_double(point.abep) << '\n';
  }
}

}  // namespace afdmim
