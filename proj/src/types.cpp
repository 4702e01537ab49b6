// types.cpp - configuration validation and bit budget arithmetic
#include "afdmim/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace afdmim {

namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

int log2_exact(int v) {
  int b = 0;
  while ((1 << b) < v) ++b;
  return b;
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  constexpr std::uint64_t limit = std::uint64_t(1) << 62;
  // The multiply-then-divide stays exact because a running product of i
  // consecutive integers is divisible by i!. A 128-bit intermediate keeps the
  // overflow check on the result itself, not the pre-division product.
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > limit) throw std::overflow_error("binomial: value exceeds 2^62");
  }
  return static_cast<std::uint64_t>(r);
}

void FrameConfig::validate() const {
  if (group_size < 1) throw std::invalid_argument("frame: group_size must be >= 1");
  if (num_groups < 1) throw std::invalid_argument("frame: num_groups must be >= 1");
  if (active_per_group < 1 || active_per_group > group_size)
    throw std::invalid_argument("frame: active_per_group must lie in [1, group_size]");
  if (num_subsymbols != group_size * num_groups)
    throw std::invalid_argument("frame: num_subsymbols must equal group_size * num_groups");
  if (!is_power_of_two(psk_order))
    throw std::invalid_argument("frame: psk_order must be a power of two");
  if (psk_order < 2) throw std::invalid_argument("frame: psk_order must be >= 2");
}

void ChannelConfig::validate() const {
  if (num_paths < 1) throw std::invalid_argument("channel: num_paths must be >= 1");
  if (max_delay < 0) throw std::invalid_argument("channel: max_delay must be >= 0");
  if (max_doppler < 0) throw std::invalid_argument("channel: max_doppler must be >= 0");
  if (num_paths > grid_size())
    throw std::invalid_argument("channel: num_paths exceeds the delay-Doppler grid");
  if (csi_error < 0.0 || csi_error > 1.0)
    throw std::invalid_argument("channel: csi_error must lie in [0, 1]");
}

BitBudget bit_budget(const FrameConfig& cfg, bool allow_no_index_bits) {
  cfg.validate();
  std::uint64_t combos = binomial(cfg.group_size, cfg.active_per_group);
  if (combos < 2 && !allow_no_index_bits)
    throw std::invalid_argument("bit_budget: activation pattern carries no bits");

  BitBudget b;
  b.index_bits = 0;
  while ((std::uint64_t(1) << (b.index_bits + 1)) <= combos) ++b.index_bits;
  b.symbol_bits = cfg.active_per_group * log2_exact(cfg.psk_order);
  b.total_bits = cfg.num_groups * (b.index_bits + b.symbol_bits);
  if (b.total_bits < 1) throw std::invalid_argument("bit_budget: frame carries no bits");

  long e_num = static_cast<long>(cfg.num_groups) * cfg.active_per_group;
  long e_den = b.total_bits;
  long a = e_num, bb = e_den;
  while (bb != 0) { long t = a % bb; a = bb; bb = t; }
  b.eb_num = e_num / a;
  b.eb_den = e_den / a;
  return b;
}

double full_diversity_c1(int num_subsymbols, int max_doppler) {
  if (num_subsymbols < 1) throw std::invalid_argument("full_diversity_c1: bad frame length");
  if (max_doppler < 0) throw std::invalid_argument("full_diversity_c1: bad max_doppler");
  return static_cast<double>(2 * max_doppler + 1) / (2.0 * num_subsymbols);
}

bool is_full_diversity(const FrameConfig& frame, const ChannelConfig& channel) {
  if (channel.grid_size() > frame.num_subsymbols) return false;
  double want = full_diversity_c1(frame.num_subsymbols, channel.max_doppler);
  return std::abs(frame.c1 - want) <= 1e-12 * std::max(1.0, std::abs(want));
}

}  // namespace afdmim
