// types.hpp - configuration records, bit budget arithmetic, linear algebra aliases
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace afdmim {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

// How a group's subsymbol slots are laid out across the DAF-domain frame.
enum class Grouping { localized, distributed };

// Per-frame bit accounting. Energy per bit is kept as an exact rational
// (active subsymbols carry unit energy, so frame energy = num_groups * active
// and eb = num_groups * active / total_bits).
struct BitBudget {
  int index_bits = 0;      // bits carried by the activation pattern, per group
  int symbol_bits = 0;     // bits carried by PSK symbols, per group
  int total_bits = 0;      // per frame, = groups * (index_bits + symbol_bits)
  long eb_num = 0;         // energy-per-bit numerator
  long eb_den = 1;         // energy-per-bit denominator

  double eb() const { return static_cast<double>(eb_num) / static_cast<double>(eb_den); }
  int group_bits() const { return index_bits + symbol_bits; }
};

// DAF-domain frame layout plus the two chirp rates of the transform.
// num_subsymbols = group_size * num_groups always holds after validate().
struct FrameConfig {
  int num_subsymbols = 0;   // frame length N
  int group_size = 0;       // subsymbol slots per group
  int active_per_group = 0; // active slots per group
  int num_groups = 0;
  int psk_order = 0;        // PSK constellation size, power of two
  Grouping grouping = Grouping::localized;
  double c1 = 0.0;          // quadratic chirp rate applied in the time domain
  double c2 = 0.0;          // quadratic chirp rate applied in the DAF domain

  void validate() const;    // throws std::invalid_argument on inconsistency
};

// Delay-Doppler channel statistics. Gains are complex Gaussian with total
// power one split evenly across paths; delays and Doppler shifts are integer
// and drawn without replacement from the (max_delay+1) x (2*max_doppler+1) grid.
struct ChannelConfig {
  int num_paths = 0;
  int max_delay = 0;        // delays lie in [0, max_delay]
  int max_doppler = 0;      // Doppler shifts lie in [-max_doppler, max_doppler]
  double csi_error = 0.0;   // estimation error weight in [0, 1]

  int grid_size() const { return (max_delay + 1) * (2 * max_doppler + 1); }
  void validate() const;
};

// Content of one group after encoding: activation pattern plus PSK symbols.
struct GroupContent {
  long combo_rank = 0;            // lexicographic rank of the activation pattern
  std::vector<int> active_slots;  // strictly increasing, in [0, group_size)
  std::vector<int> symbol_indices;
  CVec symbols;                   // unit-modulus PSK points, one per active slot
};

// One encoded frame: source bits, per-group content, and the DAF-domain vector.
struct Frame {
  std::vector<std::uint8_t> bits;
  std::vector<GroupContent> groups;
  CVec daf_symbols;
};

// One measured point of a BER sweep.
struct BerRecord {
  double snr_db = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t bit_errors_total = 0;
  std::uint64_t bit_errors_index = 0;
  std::uint64_t bit_errors_mod = 0;
  double ber_total = 0.0;
  double ber_index = 0.0;
  double ber_mod = 0.0;
  std::uint64_t seed = 0;
};

// Exact binomial coefficient; throws std::overflow_error if it exceeds 2^62.
std::uint64_t binomial(int n, int k);

// Bit budget for a frame configuration. By default a configuration whose
// activation pattern cannot carry at least one bit is rejected; the plain
// (all-slots-active) degenerate layout used by the non-IM schemes is allowed
// by passing allow_no_index_bits = true.
BitBudget bit_budget(const FrameConfig& cfg, bool allow_no_index_bits = false);

// Chirp rate giving one guard slot per Doppler bin: (2*max_doppler + 1) / (2N).
double full_diversity_c1(int num_subsymbols, int max_doppler);

// True when every delay-Doppler grid point maps to a distinct DAF-domain shift:
// the grid fits into the frame and c1 equals full_diversity_c1.
bool is_full_diversity(const FrameConfig& frame, const ChannelConfig& channel);

}  // namespace afdmim
