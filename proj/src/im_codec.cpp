// im_codec.cpp - combinadic ranking, Gray PSK mapping, frame assembly
#include "afdmim/im_codec.hpp"

#include <cmath>
#include <stdexcept>

namespace afdmim {

std::vector<int> combo_rank_to_indices(std::uint64_t rank, int n, int m) {
  if (m < 0 || m > n) throw std::invalid_argument("combo_rank_to_indices: bad sizes");
  if (rank >= binomial(n, m))
    throw std::invalid_argument("combo_rank_to_indices: rank out of range");
  std::vector<int> out;
  out.reserve(m);
  int next = 0;
  for (int k = m; k >= 1; --k) {
    // Walk candidate leading elements; combinations starting with `next`
    // occupy the first C(n-next-1, k-1) ranks of the remaining block.
    for (;;) {
      std::uint64_t block = binomial(n - next - 1, k - 1);
      if (rank < block) break;
      rank -= block;
      ++next;
    }
    out.push_back(next);
    ++next;
  }
  return out;
}

std::uint64_t indices_to_combo_rank(const std::vector<int>& indices, int n, int m) {
  if (static_cast<int>(indices.size()) != m)
    throw std::invalid_argument("indices_to_combo_rank: wrong pattern size");
  std::uint64_t rank = 0;
  int prev = -1;
  for (int k = 0; k < m; ++k) {
    int v = indices[k];
    if (v <= prev || v >= n)
      throw std::invalid_argument("indices_to_combo_rank: pattern not strictly increasing");
    for (int j = prev + 1; j < v; ++j) rank += binomial(n - j - 1, m - k - 1);
    prev = v;
  }
  return rank;
}

int gray_encode(int v) { return v ^ (v >> 1); }

int gray_decode(int v) {
  int out = 0;
  for (; v; v >>= 1) out ^= v;
  return out;
}

Complex psk_point(int index, int order) {
  double phi = 2.0 * M_PI * static_cast<double>(index) / static_cast<double>(order);
  return Complex(std::cos(phi), std::sin(phi));
}

namespace {

int log2_order(int order) {
  int b = 0;
  while ((1 << b) < order) ++b;
  if ((1 << b) != order) throw std::invalid_argument("psk: order must be a power of two");
  return b;
}

}  // namespace

int psk_bits_to_index(const std::uint8_t* bits, int order) {
  int nb = log2_order(order);
  int label = static_cast<int>(bits_to_value(bits, nb));
  return gray_decode(label);
}

Complex psk_map(const std::uint8_t* bits, int order) {
  return psk_point(psk_bits_to_index(bits, order), order);
}

int psk_hard_decision(const Complex& value, int order) {
  double phi = std::arg(value);
  long k = std::lround(phi * order / (2.0 * M_PI));
  long m = k % order;
  return static_cast<int>(m < 0 ? m + order : m);
}

int group_slot_to_daf_index(int group, int slot, Grouping grouping, int group_size,
                            int num_groups) {
  if (group < 0 || group >= num_groups || slot < 0 || slot >= group_size)
    throw std::invalid_argument("group_slot_to_daf_index: out of range");
  if (grouping == Grouping::localized) return group * group_size + slot;
  return group + slot * num_groups;
}

void value_to_bits(std::uint64_t value, int nbits, std::uint8_t* bits) {
  for (int i = 0; i < nbits; ++i)
    bits[i] = static_cast<std::uint8_t>((value >> (nbits - 1 - i)) & 1u);
}

std::uint64_t bits_to_value(const std::uint8_t* bits, int nbits) {
  std::uint64_t v = 0;
  for (int i = 0; i < nbits; ++i) {
    if (bits[i] > 1) throw std::invalid_argument("bits_to_value: bit values must be 0 or 1");
    v = (v << 1) | bits[i];
  }
  return v;
}

Frame encode_frame(const std::vector<std::uint8_t>& bits, const FrameConfig& cfg,
                   bool allow_no_index_bits) {
  BitBudget b = bit_budget(cfg, allow_no_index_bits);
  if (static_cast<int>(bits.size()) != b.total_bits)
    throw std::invalid_argument("encode_frame: wrong number of source bits");
  int sym_bits = b.symbol_bits / cfg.active_per_group;

  Frame f;
  f.bits = bits;
  f.groups.resize(cfg.num_groups);
  f.daf_symbols = CVec::Zero(cfg.num_subsymbols);

  for (int i = 0; i < cfg.num_groups; ++i) {
    const std::uint8_t* block = bits.data() + static_cast<std::size_t>(i) * b.group_bits();
    GroupContent& gc = f.groups[i];
    gc.combo_rank = static_cast<long>(bits_to_value(block, b.index_bits));
    gc.active_slots =
        combo_rank_to_indices(gc.combo_rank, cfg.group_size, cfg.active_per_group);
    gc.symbol_indices.resize(cfg.active_per_group);
    gc.symbols = CVec(cfg.active_per_group);
    for (int j = 0; j < cfg.active_per_group; ++j) {
      const std::uint8_t* sym = block + b.index_bits + j * sym_bits;
      gc.symbol_indices[j] = psk_bits_to_index(sym, cfg.psk_order);
      gc.symbols[j] = psk_point(gc.symbol_indices[j], cfg.psk_order);
      int daf = group_slot_to_daf_index(i, gc.active_slots[j], cfg.grouping,
                                        cfg.group_size, cfg.num_groups);
      f.daf_symbols[daf] = gc.symbols[j];
    }
  }
  return f;
}

std::vector<std::uint8_t> decode_frame(const std::vector<GroupDecision>& decisions,
                                       const FrameConfig& cfg, bool allow_no_index_bits) {
  BitBudget b = bit_budget(cfg, allow_no_index_bits);
  if (static_cast<int>(decisions.size()) != cfg.num_groups)
    throw std::invalid_argument("decode_frame: wrong number of group decisions");
  int sym_bits = b.symbol_bits / cfg.active_per_group;

  std::vector<std::uint8_t> bits(static_cast<std::size_t>(b.total_bits));
  for (int i = 0; i < cfg.num_groups; ++i) {
    const GroupDecision& d = decisions[i];
    std::uint64_t rank =
        indices_to_combo_rank(d.active_slots, cfg.group_size, cfg.active_per_group);
    if (b.index_bits < 62 && rank >= (std::uint64_t(1) << b.index_bits))
      throw std::invalid_argument("decode_frame: activation pattern outside usable range");
    std::uint8_t* block = bits.data() + static_cast<std::size_t>(i) * b.group_bits();
    value_to_bits(rank, b.index_bits, block);
    if (static_cast<int>(d.symbol_indices.size()) != cfg.active_per_group)
      throw std::invalid_argument("decode_frame: wrong number of symbols");
    for (int j = 0; j < cfg.active_per_group; ++j) {
      int label = gray_encode(d.symbol_indices[j]);
      value_to_bits(static_cast<std::uint64_t>(label), sym_bits,
                    block + b.index_bits + j * sym_bits);
    }
  }
  return bits;
}

GroupCandidateSet build_group_candidates(const FrameConfig& cfg, bool allow_no_index_bits) {
  BitBudget b = bit_budget(cfg, allow_no_index_bits);
  if (b.group_bits() > 20)
    throw std::invalid_argument("build_group_candidates: candidate list too large");
  int sym_bits = b.symbol_bits / cfg.active_per_group;

  GroupCandidateSet set;
  set.group_size = cfg.group_size;
  set.index_bits = b.index_bits;
  set.symbol_bits = b.symbol_bits;
  set.candidates.resize(std::size_t(1) << b.group_bits());

  std::vector<std::uint8_t> block(static_cast<std::size_t>(b.group_bits()));
  for (std::uint64_t v = 0; v < set.candidates.size(); ++v) {
    value_to_bits(v, b.group_bits(), block.data());
    GroupCandidate& c = set.candidates[v];
    c.bits = block;
    c.combo_rank = static_cast<long>(bits_to_value(block.data(), b.index_bits));
    c.active_slots =
        combo_rank_to_indices(c.combo_rank, cfg.group_size, cfg.active_per_group);
    c.symbol_indices.resize(cfg.active_per_group);
    c.vec = CVec::Zero(cfg.group_size);
    for (int j = 0; j < cfg.active_per_group; ++j) {
      const std::uint8_t* sym = block.data() + b.index_bits + j * sym_bits;
      c.symbol_indices[j] = psk_bits_to_index(sym, cfg.psk_order);
      c.vec[c.active_slots[j]] = psk_point(c.symbol_indices[j], cfg.psk_order);
    }
  }
  return set;
}

}  // namespace afdmim
