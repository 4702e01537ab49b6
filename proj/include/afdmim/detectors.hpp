// detectors.hpp - joint ML, MMSE equalizer, and per-group ML detection
#pragma once

#include "afdmim/im_codec.hpp"
#include "afdmim/types.hpp"

#include <cstdint>
#include <vector>

namespace afdmim {

enum class Detector { ml, mmse_ml, mmse_hard };

// Every DAF-domain codeword the frame can carry, column k holding the frame
// encoded from the bit pattern whose MSB-first integer value is k.
struct FrameCodebook {
  CMat codewords;  // N x 2^p
  int total_bits = 0;
};

// Throws if the frame carries more than 24 bits (codebook would not fit).
FrameCodebook build_frame_codebook(const FrameConfig& cfg, bool allow_no_index_bits = false);

// Joint ML over the codebook: returns the index of the codeword minimizing
// ||y - h_eff * codeword||^2; ties resolve to the lowest index.
int ml_detect(const CVec& y, const CMat& h_eff, const FrameCodebook& book);

struct MmseOutput {
  CVec estimate;  // x_hat = H^H (H H^H + I/gamma)^{-1} y
  RVec bias;      // bias[u] = f_u^H (H H^H + I/gamma)^{-1} f_u, in (0, 1)
};

// gamma is the linear average SNR used as the regularizer.
MmseOutput mmse_equalize(const CVec& y, const CMat& h_eff, double gamma);

// Per-group ML against the bias-scaled candidates: minimizes
// ||estimate - diag(bias) * candidate||^2; ties resolve to the lowest index.
int group_ml_detect(const CVec& group_estimate, const RVec& group_bias,
                    const GroupCandidateSet& candidates);

// Prebuilt per-configuration state for the frame detectors.
struct DetectorWorkspace {
  Detector detector = Detector::ml;
  FrameConfig frame;
  bool allow_no_index_bits = false;
  FrameCodebook codebook;        // ml only
  GroupCandidateSet candidates;  // mmse_ml only
  std::vector<std::vector<int>> group_daf_index;  // [group][slot]
};

DetectorWorkspace build_detector(const FrameConfig& cfg, Detector det,
                                 bool allow_no_index_bits = false);

// Detects one frame and returns the recovered source bits. gamma is ignored
// by the joint ML detector. mmse_hard requires all slots active.
std::vector<std::uint8_t> detect_frame(const CVec& y, const CMat& h_eff_csi, double gamma,
                                       const DetectorWorkspace& ws);

}  // namespace afdmim
