// channel.cpp - path sampling, subchannel matrices, time-domain reference
#include "afdmim/channel.hpp"

#include "afdmim/daft.hpp"

#include <cmath>
#include <stdexcept>

namespace afdmim {

namespace {

Complex unit_phase(double phi) { return Complex(std::cos(phi), std::sin(phi)); }

// exp(j*(2*pi/N)*(N*c2*(v^2 - u^2) - v*delay + N*c1*delay^2)) for row u, col v.
Complex subchannel_entry(int u, int v, int delay, const FrameConfig& f) {
  double n = static_cast<double>(f.num_subsymbols);
  double arg = n * f.c2 * (static_cast<double>(v) * v - static_cast<double>(u) * u) -
               static_cast<double>(v) * delay + n * f.c1 * static_cast<double>(delay) * delay;
  return unit_phase(2.0 * M_PI * arg / n);
}

}  // namespace

CVec PathSet::gains() const {
  CVec h(static_cast<Eigen::Index>(paths.size()));
  for (std::size_t i = 0; i < paths.size(); ++i) h[static_cast<Eigen::Index>(i)] = paths[i].gain;
  return h;
}

std::vector<std::pair<int, int>> delay_doppler_grid(const ChannelConfig& cfg) {
  std::vector<std::pair<int, int>> grid;
  grid.reserve(static_cast<std::size_t>(cfg.grid_size()));
  for (int l = 0; l <= cfg.max_delay; ++l)
    for (int a = -cfg.max_doppler; a <= cfg.max_doppler; ++a) grid.emplace_back(l, a);
  return grid;
}

PathSet sample_paths(const ChannelConfig& cfg, Rng& rng) {
  cfg.validate();
  auto grid = delay_doppler_grid(cfg);
  int total = static_cast<int>(grid.size());

  PathSet set;
  set.paths.resize(static_cast<std::size_t>(cfg.num_paths));
  double var = 1.0 / static_cast<double>(cfg.num_paths);
  // Partial Fisher-Yates: after i swaps the first i entries are a uniform
  // draw without replacement.
  for (int i = 0; i < cfg.num_paths; ++i) {
    int j = i + rng.uniform_int(total - i);
    std::swap(grid[static_cast<std::size_t>(i)], grid[static_cast<std::size_t>(j)]);
    Path& p = set.paths[static_cast<std::size_t>(i)];
    p.delay = grid[static_cast<std::size_t>(i)].first;
    p.doppler = grid[static_cast<std::size_t>(i)].second;
    p.gain = rng.cgauss(var);
  }
  set.csi_gains = set.gains();
  return set;
}

int subchannel_shift(int delay, int doppler, const FrameConfig& frame) {
  double raw = 2.0 * frame.num_subsymbols * frame.c1 * delay;
  double rounded = std::round(raw);
  if (std::abs(raw - rounded) > 1e-9)
    throw std::invalid_argument("subchannel_shift: 2*N*c1*delay must be an integer");
  return -doppler + static_cast<int>(rounded);
}

CMat subchannel_matrix(int delay, int doppler, const FrameConfig& frame) {
  frame.validate();
  int n = frame.num_subsymbols;
  int shift = subchannel_shift(delay, doppler, frame);
  CMat h = CMat::Zero(n, n);
  for (int u = 0; u < n; ++u) {
    int v = ((u + shift) % n + n) % n;
    h(u, v) = subchannel_entry(u, v, delay, frame);
  }
  return h;
}

std::vector<CMat> subchannel_matrices(const PathSet& paths, const FrameConfig& frame) {
  std::vector<CMat> out;
  out.reserve(paths.paths.size());
  for (const Path& p : paths.paths) out.push_back(subchannel_matrix(p.delay, p.doppler, frame));
  return out;
}

void build_effective(const PathSet& paths, const FrameConfig& frame, bool use_csi,
                     CMat& out) {
  int n = frame.num_subsymbols;
  out.setZero();
  for (std::size_t i = 0; i < paths.paths.size(); ++i) {
    const Path& p = paths.paths[i];
    Complex g = use_csi ? paths.csi_gains[static_cast<Eigen::Index>(i)] : p.gain;
    int shift = subchannel_shift(p.delay, p.doppler, frame);
    for (int u = 0; u < n; ++u) {
      int v = ((u + shift) % n + n) % n;
      out(u, v) += g * subchannel_entry(u, v, p.delay, frame);
    }
  }
}

EffectiveChannel effective_channel(const PathSet& paths, const FrameConfig& frame) {
  frame.validate();
  EffectiveChannel eff;
  eff.true_matrix.resize(frame.num_subsymbols, frame.num_subsymbols);
  eff.csi_matrix.resize(frame.num_subsymbols, frame.num_subsymbols);
  build_effective(paths, frame, false, eff.true_matrix);
  build_effective(paths, frame, true, eff.csi_matrix);
  return eff;
}

CVec corrupt_csi(const PathSet& paths, double rho, Rng& rng) {
  if (rho < 0.0 || rho > 1.0) throw std::invalid_argument("corrupt_csi: rho must lie in [0, 1]");
  CVec h = paths.gains();
  if (rho == 0.0) return h;
  double keep = std::sqrt(1.0 - rho * rho);
  for (Eigen::Index i = 0; i < h.size(); ++i) h[i] = keep * h[i] + rho * rng.cgauss(1.0);
  return h;
}

CVec transmit_daf_domain(const CVec& daf_symbols, const CMat& h_eff, double noise_var,
                         Rng& rng) {
  CVec y = h_eff * daf_symbols;
  for (Eigen::Index u = 0; u < y.size(); ++u) y[u] += rng.cgauss(noise_var);
  return y;
}

CVec time_domain_oracle(const CVec& daf_symbols, const PathSet& paths,
                        const FrameConfig& frame, int cpp_len) {
  frame.validate();
  int n = frame.num_subsymbols;
  if (daf_symbols.size() != n) throw std::invalid_argument("time_domain_oracle: size mismatch");
  for (const Path& p : paths.paths)
    if (p.delay > cpp_len)
      throw std::invalid_argument("time_domain_oracle: prefix shorter than max delay");

  DaftOperator op = build_daft(n, frame.c1, frame.c2);
  CVec s = idaft(op, daf_symbols);

  // Chirp-periodic prefix: sample at time -k copies s[N-k] rotated by
  // exp(-j*2*pi*c1*(N^2 - 2*N*k)).
  CVec ext(cpp_len + n);
  for (int k = 1; k <= cpp_len; ++k) {
    double phi = -2.0 * M_PI * frame.c1 *
                 (static_cast<double>(n) * n - 2.0 * static_cast<double>(n) * k);
    ext[cpp_len - k] = s[n - k] * unit_phase(phi);
  }
  ext.segment(cpp_len, n) = s;

  // r[t] = sum_i h_i * ext(t - l_i) * exp(j*2*pi*a_i*t/N) over the frame window.
  CVec r = CVec::Zero(n);
  for (const Path& p : paths.paths) {
    for (int t = 0; t < n; ++t) {
      double phi = 2.0 * M_PI * static_cast<double>(p.doppler) * t / static_cast<double>(n);
      r[t] += p.gain * ext[cpp_len + t - p.delay] * unit_phase(phi);
    }
  }
  return daft(op, r);
}

}  // namespace afdmim
