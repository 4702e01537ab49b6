// sim.hpp - Monte-Carlo BER sweep engine
//
// Per-frame pipeline: draw source bits, encode, draw a fresh channel, corrupt
// the receiver's gain estimates, add DAF-domain noise at N0 = Eb/10^(snr/10),
// detect, count index/symbol/total bit errors. Every frame owns an RNG stream
// derived from (seed, SNR point label, frame index), so results are identical
// for any worker count and reproducible from (config, seed).
#pragma once

#include "afdmim/abep.hpp"
#include "afdmim/detectors.hpp"
#include "afdmim/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <string>
#include <vector>

namespace afdmim {

inline constexpr const char* kVersion = "0.1.0";

// Default second chirp rate 1/(2*pi), an irrational value.
inline constexpr double kDefaultC2 = 0.5 / std::numbers::pi_v<double>;

enum class Scheme { afdm_im, afdm, ofdm, ofdm_im };

const char* scheme_name(Scheme s);
const char* detector_name(Detector d);
const char* grouping_name(Grouping g);
Scheme parse_scheme(const std::string& name);
Detector parse_detector(const std::string& name);
Grouping parse_grouping(const std::string& name);

// Index-modulated schemes carry pattern bits; the plain schemes run the
// degenerate all-slots-active layout (group_size = 1, num_groups = N).
bool scheme_has_index_bits(Scheme s);

struct StopRule {
  std::uint64_t min_trials = 10000;
  std::uint64_t min_bit_errors = 100;  // relative standard error <= 10%
  std::uint64_t max_trials = 10000000;
};

struct SweepConfig {
  Scheme scheme = Scheme::afdm_im;
  Detector detector = Detector::ml;
  FrameConfig frame;
  ChannelConfig channel;
  std::vector<double> snr_db_list;
  StopRule stop;
  std::uint64_t seed = 1;
  int workers = 1;
  bool cpp_check = false;

  bool allow_no_index_bits() const {
    return frame.active_per_group == frame.group_size;
  }
};

// Applies scheme conventions to cfg.frame: plain schemes get the degenerate
// single-slot layout; chirped schemes default c1 to full_diversity_c1 and c2
// to kDefaultC2 unless explicit values are passed; the subcarrier schemes
// force both chirp rates to zero. Pass NaN to request the default.
void apply_scheme_defaults(SweepConfig& cfg, double c1, double c2);

struct SweepResult {
  std::vector<BerRecord> records;
  std::string config_echo;
  double wall_seconds = 0.0;
  std::string version = kVersion;
};

BerRecord run_point(const SweepConfig& cfg, double snr_db);
SweepResult run_sweep(const SweepConfig& cfg);

struct TheoryPoint {
  double snr_db = 0.0;
  double abep = 0.0;
};

std::vector<TheoryPoint> theory_curve(const FrameConfig& frame, const ChannelConfig& channel,
                                      const std::vector<double>& snr_db_list, PepMode mode,
                                      CsiPenalty penalty = CsiPenalty::rho_linear,
                                      bool allow_no_index_bits = false);

// One "key = value" line per setting, reusable as a config file.
std::string config_echo(const SweepConfig& cfg);

// Writes '#'-prefixed echo lines (optional), the fixed header
// snr_db,trials,bit_errors_total,bit_errors_index,bit_errors_mod,
// ber_total,ber_index,ber_mod, then one row per record.
void write_sweep_csv(std::ostream& os, const SweepResult& result, bool include_echo = true);

void write_theory_csv(std::ostream& os, const std::vector<TheoryPoint>& curve);

}  // namespace afdmim
