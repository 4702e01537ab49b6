// abep.hpp - closed-form average bit error probability bound
//
// For a codeword pair (x_i, x_j) and per-path subchannels {H_k} the receive
// difference is (Y_i - Y_j) h with Y_x = [H_1 x, ..., H_P x]. The pairwise
// error probability is averaged over the Gaussian gain estimate using the
// two-exponential approximation Q(z) ~ exp(-z^2/2)/12 + exp(-2 z^2/3)/4,
// which turns into a determinant over the P x P matrix D^H D (its nonzero
// eigenvalues coincide with those of the N x N outer form D D^H).
#pragma once

#include "afdmim/types.hpp"

#include <vector>

namespace afdmim {

// Closed forms for the unconditional pairwise error probability.
enum class PepMode { det_form, high_snr };

// Weight of the channel estimation error inside the pairwise denominators:
// rho_linear uses 4*rho*||Y||^2 (resp. 3*rho*||Y||^2) as printed in the
// source analysis, rho_squared substitutes rho^2 to match the estimation
// error variance.
enum class CsiPenalty { rho_linear, rho_squared };

// Y_x: N x P matrix with columns H_k * x.
CMat upsilon(const CVec& x, const std::vector<CMat>& subchannels);

// Two-exponential approximation of the Gaussian tail.
double q_approx(double z);

// Ingredients of one pairwise term.
struct PairwiseTerm {
  CMat a_small;       // D^H D, P x P Hermitian PSD
  RVec eigenvalues;   // ascending, negatives clipped at -1e-10
  double upsilon_sq;  // ||Y_{x_i}||_F^2
  int rank = 0;
};

PairwiseTerm pairwise_term(const CVec& xi, const CVec& xj,
                           const std::vector<CMat>& subchannels);

// Unconditional pairwise error probability for deciding x_j over x_i.
double pep_unconditional(const CVec& xi, const CVec& xj,
                         const std::vector<CMat>& subchannels, double noise_var,
                         double rho, PepMode mode,
                         CsiPenalty penalty = CsiPenalty::rho_linear);

// Union bound split by bit class (all bits / index bits / symbol bits).
struct AbepSplit {
  double total = 0.0;
  double index_bits = 0.0;  // zero when the layout carries no index bits
  double mod_bits = 0.0;
};

// Union bound over the full codebook, averaged over every placement of
// num_paths on the delay-Doppler grid. Frames above 16 bits are rejected.
double abep_bound(const FrameConfig& frame, const ChannelConfig& channel, double snr_db,
                  PepMode mode, CsiPenalty penalty = CsiPenalty::rho_linear,
                  bool allow_no_index_bits = false);

AbepSplit abep_bound_split(const FrameConfig& frame, const ChannelConfig& channel,
                           double snr_db, PepMode mode,
                           CsiPenalty penalty = CsiPenalty::rho_linear,
                           bool allow_no_index_bits = false);

}  // namespace afdmim
