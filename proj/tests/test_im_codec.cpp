// test_im_codec.cpp - combinadic ranking, Gray PSK, frame encode/decode
#include "afdmim/im_codec.hpp"

#include "afdmim/rng.hpp"
#include "doctest.h"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace afdmim;

namespace {

FrameConfig frame_of(int n, int m, int psk, int g,
                     Grouping grouping = Grouping::localized) {
  FrameConfig cfg;
  cfg.num_subsymbols = n * g;
  cfg.group_size = n;
  cfg.active_per_group = m;
  cfg.num_groups = g;
  cfg.psk_order = psk;
  cfg.grouping = grouping;
  return cfg;
}

}  // namespace

TEST_CASE("combination ranking is lexicographic") {
  CHECK(combo_rank_to_indices(0, 4, 1) == std::vector<int>{0});
  CHECK(combo_rank_to_indices(3, 4, 1) == std::vector<int>{3});
  CHECK(combo_rank_to_indices(0, 4, 2) == std::vector<int>({0, 1}));
  CHECK(combo_rank_to_indices(2, 4, 2) == std::vector<int>({0, 3}));
  CHECK(combo_rank_to_indices(5, 4, 2) == std::vector<int>({2, 3}));
  CHECK(indices_to_combo_rank({2, 3}, 4, 2) == 5);
  CHECK_THROWS_AS((void)combo_rank_to_indices(6, 4, 2), std::invalid_argument);
  CHECK_THROWS_AS((void)indices_to_combo_rank({3, 2}, 4, 2), std::invalid_argument);
  CHECK_THROWS_AS((void)indices_to_combo_rank({0, 4}, 4, 2), std::invalid_argument);

  // Full round trip over C(6,3) = 20 patterns, strictly increasing output.
  std::vector<int> prev;
  for (std::uint64_t r = 0; r < 20; ++r) {
    std::vector<int> idx = combo_rank_to_indices(r, 6, 3);
    REQUIRE(idx.size() == 3);
    CHECK(idx[0] < idx[1]);
    CHECK(idx[1] < idx[2]);
    CHECK(indices_to_combo_rank(idx, 6, 3) == r);
    if (!prev.empty()) CHECK(prev < idx);  // lexicographic order
    prev = idx;
  }
}

TEST_CASE("gray code round trip and adjacency") {
  for (int v = 0; v < 64; ++v) CHECK(gray_decode(gray_encode(v)) == v);
  for (int order : {2, 4, 8, 16}) {
    for (int k = 0; k < order; ++k) {
      // Neighbouring constellation points carry labels differing in one bit.
      int a = gray_encode(k);
      int b = gray_encode((k + 1) % order);
      CHECK(std::popcount(static_cast<unsigned>(a ^ b)) == 1);
    }
  }
}

TEST_CASE("psk mapping") {
  CHECK(psk_point(0, 4) == Complex(1.0, 0.0));
  CHECK(psk_point(1, 4).imag() == doctest::Approx(1.0));
  CHECK(psk_point(2, 4).real() == doctest::Approx(-1.0));

  const std::uint8_t b00[] = {0, 0};
  const std::uint8_t b01[] = {0, 1};
  const std::uint8_t b11[] = {1, 1};
  const std::uint8_t b1[] = {1};
  CHECK(psk_map(b00, 4).real() == doctest::Approx(1.0));
  CHECK(psk_bits_to_index(b01, 4) == 1);
  CHECK(psk_bits_to_index(b11, 4) == 2);
  CHECK(psk_map(b11, 4).real() == doctest::Approx(-1.0));
  CHECK(psk_map(b1, 2).real() == doctest::Approx(-1.0));

  for (int order : {2, 4, 8}) {
    for (int k = 0; k < order; ++k) {
      CHECK(std::abs(psk_point(k, order)) == doctest::Approx(1.0));
      CHECK(psk_hard_decision(psk_point(k, order), order) == k);
      // Small rotation must not move the decision.
      CHECK(psk_hard_decision(psk_point(k, order) * std::polar(1.0, 0.1), order) == k);
    }
  }
}

TEST_CASE("group slot layout") {
  // Localized: groups occupy contiguous blocks.
  CHECK(group_slot_to_daf_index(0, 2, Grouping::localized, 4, 4) == 2);
  CHECK(group_slot_to_daf_index(3, 1, Grouping::localized, 4, 4) == 13);
  // Distributed: slots of one group are num_groups apart.
  CHECK(group_slot_to_daf_index(1, 2, Grouping::distributed, 4, 4) == 9);
  CHECK(group_slot_to_daf_index(3, 0, Grouping::distributed, 4, 4) == 3);
  // A single group makes both layouts coincide.
  for (int s = 0; s < 4; ++s)
    CHECK(group_slot_to_daf_index(0, s, Grouping::localized, 4, 1) ==
          group_slot_to_daf_index(0, s, Grouping::distributed, 4, 1));
  CHECK_THROWS_AS((void)group_slot_to_daf_index(0, 4, Grouping::localized, 4, 1),
                  std::invalid_argument);
}

TEST_CASE("bit packing is MSB first") {
  std::uint8_t bits[4];
  value_to_bits(0b1011, 4, bits);
  CHECK(bits[0] == 1);
  CHECK(bits[1] == 0);
  CHECK(bits[2] == 1);
  CHECK(bits[3] == 1);
  CHECK(bits_to_value(bits, 4) == 0b1011);
  std::uint8_t bad[] = {0, 2};
  CHECK_THROWS_AS((void)bits_to_value(bad, 2), std::invalid_argument);
}

TEST_CASE("encoding matches the one-of-four activation table") {
  // n=4, m=1, QPSK, one group: index bits pick the slot, symbol bits the point.
  FrameConfig cfg = frame_of(4, 1, 4, 1);
  for (int slot_bits = 0; slot_bits < 4; ++slot_bits) {
    for (int sym_bits = 0; sym_bits < 4; ++sym_bits) {
      std::vector<std::uint8_t> bits(4);
      value_to_bits(static_cast<std::uint64_t>(slot_bits), 2, bits.data());
      value_to_bits(static_cast<std::uint64_t>(sym_bits), 2, bits.data() + 2);
      Frame f = encode_frame(bits, cfg);
      REQUIRE(f.groups.size() == 1);
      int slot = slot_bits;  // lexicographic single-slot patterns are {0},{1},{2},{3}
      CHECK(f.groups[0].active_slots == std::vector<int>{slot});
      Complex expect = psk_map(bits.data() + 2, 4);
      CHECK(std::abs(f.daf_symbols(slot) - expect) < 1e-12);
      for (int u = 0; u < 4; ++u)
        if (u != slot) CHECK(f.daf_symbols(u) == Complex(0.0, 0.0));
    }
  }
}

TEST_CASE("frame encode/decode round trip") {
  for (Grouping grouping : {Grouping::localized, Grouping::distributed}) {
    for (FrameConfig cfg : {frame_of(4, 1, 4, 4, grouping), frame_of(4, 2, 2, 4, grouping),
                            frame_of(6, 3, 8, 2, grouping)}) {
      BitBudget budget = bit_budget(cfg);
      Rng rng(17);
      for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::uint8_t> bits(budget.total_bits);
        for (auto& b : bits) b = rng.bit();
        Frame f = encode_frame(bits, cfg);
        // Active-slot energy placement.
        int nonzero = 0;
        for (int u = 0; u < cfg.num_subsymbols; ++u)
          if (std::abs(f.daf_symbols(u)) > 0.0) ++nonzero;
        CHECK(nonzero == cfg.active_per_group * cfg.num_groups);
        // Perfect decisions reproduce the source bits.
        std::vector<GroupDecision> decisions;
        for (const GroupContent& grp : f.groups)
          decisions.push_back({grp.active_slots, grp.symbol_indices});
        CHECK(decode_frame(decisions, cfg) == bits);
      }
    }
  }
}

TEST_CASE("encode rejects malformed input") {
  FrameConfig cfg = frame_of(4, 1, 4, 1);
  CHECK_THROWS_AS((void)encode_frame(std::vector<std::uint8_t>(3, 0), cfg),
                  std::invalid_argument);
  std::vector<std::uint8_t> bits(4, 0);
  bits[1] = 7;
  CHECK_THROWS_AS((void)encode_frame(bits, cfg), std::invalid_argument);
}

TEST_CASE("decode rejects activation patterns outside the usable range") {
  // n=4, m=2: C(4,2)=6 patterns but only 2^2=4 usable; rank 5 = {2,3} is out.
  FrameConfig cfg = frame_of(4, 2, 2, 1);
  std::vector<GroupDecision> decisions{{{2, 3}, {0, 0}}};
  CHECK_THROWS_AS((void)decode_frame(decisions, cfg), std::invalid_argument);
  decisions[0].active_slots = {1, 3};  // rank 4, also out of range
  CHECK_THROWS_AS((void)decode_frame(decisions, cfg), std::invalid_argument);
  decisions[0].active_slots = {1, 2};  // rank 3, valid
  CHECK_NOTHROW((void)decode_frame(decisions, cfg));
}

TEST_CASE("group candidate tables enumerate every bit block") {
  for (FrameConfig cfg : {frame_of(4, 1, 4, 1), frame_of(4, 2, 2, 1), frame_of(6, 3, 8, 1)}) {
    GroupCandidateSet set = build_group_candidates(cfg);
    BitBudget budget = bit_budget(cfg);
    REQUIRE(static_cast<int>(set.candidates.size()) == (1 << budget.group_bits()));
    CHECK(set.index_bits + set.symbol_bits == budget.group_bits());
    for (std::size_t k = 0; k < set.candidates.size(); ++k) {
      const GroupCandidate& cand = set.candidates[k];
      // Candidate order is the integer value of the group's bit block.
      CHECK(bits_to_value(cand.bits.data(), budget.group_bits()) == k);
      // The stored subvector matches a fresh single-group encode.
      Frame f = encode_frame(cand.bits, cfg);
      CHECK((cand.vec - f.daf_symbols).norm() < 1e-12);
      CHECK(cand.combo_rank ==
            static_cast<long>(indices_to_combo_rank(cand.active_slots, cfg.group_size,
                                                    cfg.active_per_group)));
    }
  }
}
