// daft.cpp - discrete affine Fourier transform construction
#include "afdmim/daft.hpp"

#include <cmath>
#include <stdexcept>

namespace afdmim {

CVec chirp_diagonal(int size, double rate) {
  CVec d(size);
  for (int u = 0; u < size; ++u) {
    double phi = -2.0 * M_PI * rate * static_cast<double>(u) * static_cast<double>(u);
    d[u] = Complex(std::cos(phi), std::sin(phi));
  }
  return d;
}

DaftOperator build_daft(int size, double c1, double c2) {
  if (size < 1) throw std::invalid_argument("build_daft: size must be >= 1");
  DaftOperator op;
  op.size = size;
  op.c1 = c1;
  op.c2 = c2;

  CMat f(size, size);
  double scale = 1.0 / std::sqrt(static_cast<double>(size));
  for (int u = 0; u < size; ++u) {
    for (int v = 0; v < size; ++v) {
      // Reduce u*v mod N before the trig call to keep the argument small.
      long uv = (static_cast<long>(u) * v) % size;
      double phi = -2.0 * M_PI * static_cast<double>(uv) / static_cast<double>(size);
      f(u, v) = scale * Complex(std::cos(phi), std::sin(phi));
    }
  }

  op.forward = chirp_diagonal(size, c2).asDiagonal() * f *
               CMat(chirp_diagonal(size, c1).asDiagonal());
  op.inverse = op.forward.adjoint();
  return op;
}

CVec idaft(const DaftOperator& op, const CVec& daf_symbols) {
  if (daf_symbols.size() != op.size) throw std::invalid_argument("idaft: size mismatch");
  return op.inverse * daf_symbols;
}

CVec daft(const DaftOperator& op, const CVec& time_samples) {
  if (time_samples.size() != op.size) throw std::invalid_argument("daft: size mismatch");
  return op.forward * time_samples;
}

}  // namespace afdmim
