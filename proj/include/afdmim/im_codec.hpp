// im_codec.hpp - index-modulation bit mapping: activation patterns, PSK, framing
//
// Bit conventions used throughout: bit blocks are MSB-first, each group's
// index bits precede its symbol bits, and groups are laid out in order.
// Activation patterns are the first 2^p1 m-combinations of the group's slots
// in lexicographic order; PSK symbols are Gray-coded points exp(j*2*pi*k/M).
#pragma once

#include "afdmim/types.hpp"

#include <cstdint>
#include <vector>

namespace afdmim {

// Lexicographic rank <-> m-combination of {0, ..., n-1}, rank 0 = {0..m-1}.
std::vector<int> combo_rank_to_indices(std::uint64_t rank, int n, int m);
std::uint64_t indices_to_combo_rank(const std::vector<int>& indices, int n, int m);

int gray_encode(int v);
int gray_decode(int v);

// k-th constellation point exp(j*2*pi*k/order).
Complex psk_point(int index, int order);

// Gray-coded PSK map: MSB-first bits -> constellation index / point.
int psk_bits_to_index(const std::uint8_t* bits, int order);
Complex psk_map(const std::uint8_t* bits, int order);

// Nearest constellation point by angle.
int psk_hard_decision(const Complex& value, int order);

// DAF-domain index of a group's slot for the given layout.
// localized: group*group_size + slot, distributed: group + slot*num_groups.
int group_slot_to_daf_index(int group, int slot, Grouping grouping, int group_size,
                            int num_groups);

// Packs an unsigned value into MSB-first bits / reads it back.
void value_to_bits(std::uint64_t value, int nbits, std::uint8_t* bits);
std::uint64_t bits_to_value(const std::uint8_t* bits, int nbits);

// Encodes total_bits source bits into a frame; throws if the bit count or any
// bit value is invalid.
Frame encode_frame(const std::vector<std::uint8_t>& bits, const FrameConfig& cfg,
                   bool allow_no_index_bits = false);

// Per-group detector output: chosen activation pattern plus symbol indices.
struct GroupDecision {
  std::vector<int> active_slots;
  std::vector<int> symbol_indices;
};

// Maps per-group decisions back to source bits. A decision whose activation
// pattern falls outside the usable 2^p1 range is rejected.
std::vector<std::uint8_t> decode_frame(const std::vector<GroupDecision>& decisions,
                                       const FrameConfig& cfg,
                                       bool allow_no_index_bits = false);

// One entry of a group's candidate list.
struct GroupCandidate {
  long combo_rank = 0;
  std::vector<int> active_slots;
  std::vector<int> symbol_indices;
  CVec vec;                        // group_size-long subvector
  std::vector<std::uint8_t> bits;  // index bits then symbol bits, MSB-first
};

// All 2^(p1+p2) transmit subvectors a single group can carry, indexed by the
// integer value of the group's bit block (so candidate order is the
// deterministic tie-break order).
struct GroupCandidateSet {
  int group_size = 0;
  int index_bits = 0;
  int symbol_bits = 0;
  std::vector<GroupCandidate> candidates;
};

GroupCandidateSet build_group_candidates(const FrameConfig& cfg,
                                         bool allow_no_index_bits = false);

}  // namespace afdmim
