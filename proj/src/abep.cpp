// abep.cpp - pairwise error probabilities and the union bound
#include "afdmim/abep.hpp"

#include "afdmim/channel.hpp"
#include "afdmim/detectors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace afdmim {

CMat upsilon(const CVec& x, const std::vector<CMat>& subchannels) {
  if (subchannels.empty()) throw std::invalid_argument("upsilon: no subchannels");
  Eigen::Index n = x.size();
  CMat y(n, static_cast<Eigen::Index>(subchannels.size()));
  for (std::size_t k = 0; k < subchannels.size(); ++k) {
    if (subchannels[k].rows() != n || subchannels[k].cols() != n)
      throw std::invalid_argument("upsilon: subchannel size mismatch");
    y.col(static_cast<Eigen::Index>(k)) = subchannels[k] * x;
  }
  return y;
}

double q_approx(double z) {
  return std::exp(-0.5 * z * z) / 12.0 + std::exp(-2.0 * z * z / 3.0) / 4.0;
}

PairwiseTerm pairwise_term(const CVec& xi, const CVec& xj,
                           const std::vector<CMat>& subchannels) {
  CMat yi = upsilon(xi, subchannels);
  CMat delta = yi - upsilon(xj, subchannels);

  PairwiseTerm term;
  term.upsilon_sq = yi.squaredNorm();
  term.a_small = delta.adjoint() * delta;

  Eigen::SelfAdjointEigenSolver<CMat> es(term.a_small);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("pairwise_term: eigen decomposition failed");
  term.eigenvalues = es.eigenvalues();
  double top = term.eigenvalues.size() ? term.eigenvalues.maxCoeff() : 0.0;
  double tol = 1e-9 * std::max(top, 1.0);
  for (Eigen::Index k = 0; k < term.eigenvalues.size(); ++k) {
    if (term.eigenvalues[k] < -1e-10)
      throw std::runtime_error("pairwise_term: matrix not positive semidefinite");
    if (term.eigenvalues[k] < 0.0) term.eigenvalues[k] = 0.0;
    if (term.eigenvalues[k] > tol) ++term.rank;
  }
  return term;
}

namespace {

double pep_from_term(const PairwiseTerm& term, double noise_var, double rho,
                     PepMode mode, CsiPenalty penalty) {
  double p = static_cast<double>(term.eigenvalues.size());
  double weight = penalty == CsiPenalty::rho_linear ? rho : rho * rho;
  double q1 = 1.0 / (4.0 * noise_var + 4.0 * weight * term.upsilon_sq);
  double q2 = 1.0 / (3.0 * noise_var + 3.0 * weight * term.upsilon_sq);

  if (mode == PepMode::det_form) {
    // Estimate covariance (1-rho^2)/P + rho^2 per path, identical across paths.
    double sigma = (1.0 - rho * rho) / p + rho * rho;
    double d1 = 1.0, d2 = 1.0;
    for (Eigen::Index k = 0; k < term.eigenvalues.size(); ++k) {
      d1 *= 1.0 + q1 * sigma * term.eigenvalues[k];
      d2 *= 1.0 + q2 * sigma * term.eigenvalues[k];
    }
    return 1.0 / (12.0 * d1) + 1.0 / (4.0 * d2);
  }

  // High-SNR form: product over the nonzero eigenvalues scaled by 1/P.
  double top = term.eigenvalues.size() ? term.eigenvalues.maxCoeff() : 0.0;
  double tol = 1e-9 * std::max(top, 1.0);
  double d1 = 1.0, d2 = 1.0;
  for (Eigen::Index k = 0; k < term.eigenvalues.size(); ++k) {
    if (term.eigenvalues[k] <= tol) continue;
    d1 *= q1 * term.eigenvalues[k] / p;
    d2 *= q2 * term.eigenvalues[k] / p;
  }
  return 1.0 / (12.0 * d1) + 1.0 / (4.0 * d2);
}

}  // namespace

double pep_unconditional(const CVec& xi, const CVec& xj,
                         const std::vector<CMat>& subchannels, double noise_var,
                         double rho, PepMode mode, CsiPenalty penalty) {
  if (noise_var <= 0.0) throw std::invalid_argument("pep_unconditional: noise_var must be > 0");
  return pep_from_term(pairwise_term(xi, xj, subchannels), noise_var, rho, mode, penalty);
}

AbepSplit abep_bound_split(const FrameConfig& frame, const ChannelConfig& channel,
                           double snr_db, PepMode mode, CsiPenalty penalty,
                           bool allow_no_index_bits) {
  frame.validate();
  channel.validate();
  BitBudget budget = bit_budget(frame, allow_no_index_bits);
  if (budget.total_bits > 16)
    throw std::invalid_argument("abep_bound: frame carries more than 16 bits");

  FrameCodebook book = build_frame_codebook(frame, allow_no_index_bits);
  std::size_t count = std::size_t(1) << budget.total_bits;
  double noise_var = budget.eb() / std::pow(10.0, snr_db / 10.0);

  // Mask of the index-bit positions inside the MSB-first codeword label.
  std::uint64_t index_mask = 0;
  for (int g = 0; g < frame.num_groups; ++g)
    for (int b = 0; b < budget.index_bits; ++b) {
      int pos = g * budget.group_bits() + b;  // MSB-first position
      index_mask |= std::uint64_t(1) << (budget.total_bits - 1 - pos);
    }

  auto grid = delay_doppler_grid(channel);
  int total = static_cast<int>(grid.size());
  int p = channel.num_paths;

  // Iterate every size-p subset of the grid via the lexicographic successor.
  std::vector<int> pick(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) pick[static_cast<std::size_t>(i)] = i;
  double sum_total = 0.0, sum_index = 0.0, sum_mod = 0.0;
  std::size_t placements = 0;

  std::vector<CMat> subs(static_cast<std::size_t>(p));
  for (;;) {
    for (int i = 0; i < p; ++i) {
      auto [delay, doppler] = grid[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])];
      subs[static_cast<std::size_t>(i)] = subchannel_matrix(delay, doppler, frame);
    }
    double acc_total = 0.0, acc_index = 0.0, acc_mod = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < count; ++j) {
        if (i == j) continue;
        double pep = pep_unconditional(book.codewords.col(static_cast<Eigen::Index>(i)),
                                       book.codewords.col(static_cast<Eigen::Index>(j)), subs,
                                       noise_var, channel.csi_error, mode, penalty);
        std::uint64_t diff = static_cast<std::uint64_t>(i ^ j);
        acc_total += pep * static_cast<double>(__builtin_popcountll(diff));
        acc_index += pep * static_cast<double>(__builtin_popcountll(diff & index_mask));
        acc_mod += pep * static_cast<double>(__builtin_popcountll(diff & ~index_mask));
      }
    }
    sum_total += acc_total / (static_cast<double>(count) * budget.total_bits);
    int index_total = frame.num_groups * budget.index_bits;
    int mod_total = frame.num_groups * budget.symbol_bits;
    if (index_total > 0)
      sum_index += acc_index / (static_cast<double>(count) * index_total);
    if (mod_total > 0) sum_mod += acc_mod / (static_cast<double>(count) * mod_total);
    ++placements;

    // Advance to the next combination.
    int k = p - 1;
    while (k >= 0 && pick[static_cast<std::size_t>(k)] == total - p + k) --k;
    if (k < 0) break;
    ++pick[static_cast<std::size_t>(k)];
    for (int i = k + 1; i < p; ++i)
      pick[static_cast<std::size_t>(i)] = pick[static_cast<std::size_t>(i - 1)] + 1;
  }
  AbepSplit out;
  out.total = sum_total / static_cast<double>(placements);
  out.index_bits = sum_index / static_cast<double>(placements);
  out.mod_bits = sum_mod / static_cast<double>(placements);
  return out;
}

double abep_bound(const FrameConfig& frame, const ChannelConfig& channel, double snr_db,
                  PepMode mode, CsiPenalty penalty, bool allow_no_index_bits) {
  return abep_bound_split(frame, channel, snr_db, mode, penalty, allow_no_index_bits).total;
}

}  // namespace afdmim
