// channel.hpp - linear time-varying multipath channel in the DAF domain
//
// Each path (gain h_i, integer delay l_i, integer Doppler a_i) contributes a
// phase-permutation subchannel matrix: row u of H_i has its single nonzero at
// column (u + shift_i) mod N, shift_i = -a_i + 2*N*c1*l_i, with entry
// exp(j*(2*pi/N)*(N*c2*(v^2 - u^2) - v*l_i + N*c1*l_i^2)) at column v.
// The effective DAF-domain channel is sum_i h_i * H_i.
#pragma once

#include "afdmim/rng.hpp"
#include "afdmim/types.hpp"

#include <utility>
#include <vector>

namespace afdmim {

struct Path {
  Complex gain;   // h_i
  int delay = 0;  // l_i, samples
  int doppler = 0;  // a_i, cycles per frame
};

struct PathSet {
  std::vector<Path> paths;
  CVec csi_gains;  // receiver-side gain estimates, set by corrupt_csi

  CVec gains() const;
};

// All (delay, doppler) grid points, delay-major, doppler from -max to +max.
std::vector<std::pair<int, int>> delay_doppler_grid(const ChannelConfig& cfg);

// Draws num_paths gains CN(0, 1/num_paths) on distinct grid points chosen
// uniformly without replacement. csi_gains starts equal to the true gains.
PathSet sample_paths(const ChannelConfig& cfg, Rng& rng);

// DAF-domain shift of a path; throws if 2*N*c1*delay is not an integer.
int subchannel_shift(int delay, int doppler, const FrameConfig& frame);

// Dense N x N subchannel matrix of a single unit-gain path.
CMat subchannel_matrix(int delay, int doppler, const FrameConfig& frame);

std::vector<CMat> subchannel_matrices(const PathSet& paths, const FrameConfig& frame);

struct EffectiveChannel {
  CMat true_matrix;  // built from the true gains
  CMat csi_matrix;   // built from csi_gains
};

EffectiveChannel effective_channel(const PathSet& paths, const FrameConfig& frame);

// In-place builder used by the simulation hot loop; out must be N x N.
void build_effective(const PathSet& paths, const FrameConfig& frame, bool use_csi,
                     CMat& out);

// Gain estimates sqrt(1 - rho^2) * h_i + rho * phi_i with phi_i iid CN(0, 1).
// rho = 0 returns the true gains exactly and draws nothing from rng.
CVec corrupt_csi(const PathSet& paths, double rho, Rng& rng);

// y = H x + w with w iid CN(0, noise_var) per entry.
CVec transmit_daf_domain(const CVec& daf_symbols, const CMat& h_eff, double noise_var,
                         Rng& rng);

// Reference receive path computed sample by sample in the time domain:
// inverse transform, chirp-periodic prefix of cpp_len samples, per-path delay
// and Doppler applied to the extended signal, prefix discard, forward
// transform. Must match effective_channel * daf_symbols.
CVec time_domain_oracle(const CVec& daf_symbols, const PathSet& paths,
                        const FrameConfig& frame, int cpp_len);

}  // namespace afdmim
