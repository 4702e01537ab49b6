// detectors.cpp - ML and MMSE-based frame detection
#include "afdmim/detectors.hpp"

#include <Eigen/Cholesky>

#include <limits>
#include <stdexcept>

namespace afdmim {

FrameCodebook build_frame_codebook(const FrameConfig& cfg, bool allow_no_index_bits) {
  BitBudget b = bit_budget(cfg, allow_no_index_bits);
  if (b.total_bits > 24)
    throw std::invalid_argument("build_frame_codebook: frame carries more than 24 bits");

  FrameCodebook book;
  book.total_bits = b.total_bits;
  std::size_t count = std::size_t(1) << b.total_bits;
  book.codewords.resize(cfg.num_subsymbols, static_cast<Eigen::Index>(count));
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(b.total_bits));
  for (std::size_t v = 0; v < count; ++v) {
    value_to_bits(v, b.total_bits, bits.data());
    book.codewords.col(static_cast<Eigen::Index>(v)) =
        encode_frame(bits, cfg, allow_no_index_bits).daf_symbols;
  }
  return book;
}

int ml_detect(const CVec& y, const CMat& h_eff, const FrameCodebook& book) {
  if (y.size() != h_eff.rows() || h_eff.cols() != book.codewords.rows())
    throw std::invalid_argument("ml_detect: size mismatch");
  CMat mapped = h_eff * book.codewords;
  int best = 0;
  double best_metric = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < mapped.cols(); ++k) {
    double metric = (y - mapped.col(k)).squaredNorm();
    if (metric < best_metric) {
      best_metric = metric;
      best = static_cast<int>(k);
    }
  }
  return best;
}

MmseOutput mmse_equalize(const CVec& y, const CMat& h_eff, double gamma) {
  if (y.size() != h_eff.rows()) throw std::invalid_argument("mmse_equalize: size mismatch");
  if (gamma <= 0.0) throw std::invalid_argument("mmse_equalize: gamma must be positive");
  Eigen::Index n = h_eff.rows();

  CMat gram = CMat::Zero(n, n);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(h_eff);
  gram.diagonal().array() += Complex(1.0 / gamma, 0.0);
  Eigen::LLT<CMat> llt(gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("mmse_equalize: regularized Gram matrix not positive definite");

  // With H H^H + I/gamma = L L^H, the estimate is (L^{-1}H)^H (L^{-1}y) and
  // the bias f_u^H (L L^H)^{-1} f_u is the squared norm of column u of L^{-1}H.
  CMat z = h_eff;
  llt.matrixL().solveInPlace(z);
  CVec u = y;
  llt.matrixL().solveInPlace(u);
  MmseOutput out;
  out.estimate = z.adjoint() * u;
  out.bias = z.colwise().squaredNorm().transpose();
  return out;
}

int group_ml_detect(const CVec& group_estimate, const RVec& group_bias,
                    const GroupCandidateSet& candidates) {
  if (group_estimate.size() != candidates.group_size ||
      group_bias.size() != candidates.group_size)
    throw std::invalid_argument("group_ml_detect: size mismatch");
  int best = 0;
  double best_metric = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < candidates.candidates.size(); ++k) {
    const GroupCandidate& c = candidates.candidates[k];
    double metric = 0.0;
    for (int s = 0; s < candidates.group_size; ++s) {
      Complex d = group_estimate[s] - group_bias[s] * c.vec[s];
      metric += std::norm(d);
    }
    if (metric < best_metric) {
      best_metric = metric;
      best = static_cast<int>(k);
    }
  }
  return best;
}

DetectorWorkspace build_detector(const FrameConfig& cfg, Detector det,
                                 bool allow_no_index_bits) {
  cfg.validate();
  DetectorWorkspace ws;
  ws.detector = det;
  ws.frame = cfg;
  ws.allow_no_index_bits = allow_no_index_bits;
  if (det == Detector::ml) {
    ws.codebook = build_frame_codebook(cfg, allow_no_index_bits);
  } else if (det == Detector::mmse_ml) {
    ws.candidates = build_group_candidates(cfg, allow_no_index_bits);
  } else if (cfg.active_per_group != cfg.group_size) {
    throw std::invalid_argument("detect_frame: mmse_hard requires all slots active");
  }
  ws.group_daf_index.resize(static_cast<std::size_t>(cfg.num_groups));
  for (int i = 0; i < cfg.num_groups; ++i) {
    auto& row = ws.group_daf_index[static_cast<std::size_t>(i)];
    row.resize(static_cast<std::size_t>(cfg.group_size));
    for (int s = 0; s < cfg.group_size; ++s)
      row[static_cast<std::size_t>(s)] =
          group_slot_to_daf_index(i, s, cfg.grouping, cfg.group_size, cfg.num_groups);
  }
  return ws;
}

std::vector<std::uint8_t> detect_frame(const CVec& y, const CMat& h_eff_csi, double gamma,
                                       const DetectorWorkspace& ws) {
  const FrameConfig& cfg = ws.frame;
  if (ws.detector == Detector::ml) {
    int k = ml_detect(y, h_eff_csi, ws.codebook);
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(ws.codebook.total_bits));
    value_to_bits(static_cast<std::uint64_t>(k), ws.codebook.total_bits, bits.data());
    return bits;
  }

  MmseOutput eq = mmse_equalize(y, h_eff_csi, gamma);
  std::vector<GroupDecision> decisions(static_cast<std::size_t>(cfg.num_groups));

  if (ws.detector == Detector::mmse_ml) {
    CVec est(cfg.group_size);
    RVec bias(cfg.group_size);
    for (int i = 0; i < cfg.num_groups; ++i) {
      const auto& daf = ws.group_daf_index[static_cast<std::size_t>(i)];
      for (int s = 0; s < cfg.group_size; ++s) {
        est[s] = eq.estimate[daf[static_cast<std::size_t>(s)]];
        bias[s] = eq.bias[daf[static_cast<std::size_t>(s)]];
      }
      const GroupCandidate& c =
          ws.candidates.candidates[static_cast<std::size_t>(group_ml_detect(est, bias, ws.candidates))];
      decisions[static_cast<std::size_t>(i)] = {c.active_slots, c.symbol_indices};
    }
    return decode_frame(decisions, cfg, ws.allow_no_index_bits);
  }

  // mmse_hard: all slots active, nearest constellation point per subsymbol.
  for (int i = 0; i < cfg.num_groups; ++i) {
    GroupDecision& d = decisions[static_cast<std::size_t>(i)];
    d.active_slots.resize(static_cast<std::size_t>(cfg.group_size));
    d.symbol_indices.resize(static_cast<std::size_t>(cfg.group_size));
    const auto& daf = ws.group_daf_index[static_cast<std::size_t>(i)];
    for (int s = 0; s < cfg.group_size; ++s) {
      d.active_slots[static_cast<std::size_t>(s)] = s;
      d.symbol_indices[static_cast<std::size_t>(s)] =
          psk_hard_decision(eq.estimate[daf[static_cast<std::size_t>(s)]], cfg.psk_order);
    }
  }
  return decode_frame(decisions, cfg, ws.allow_no_index_bits);
}

}  // namespace afdmim
