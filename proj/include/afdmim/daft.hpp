// daft.hpp - discrete affine Fourier transform operator
//
// Forward transform matrix: A = C2 * F * C1 with C_r = diag(exp(-j*2*pi*r*u^2))
// for u = 0..N-1 and F the unitary DFT matrix F[u,v] = exp(-j*2*pi*u*v/N)/sqrt(N).
// The inverse transform is A^H. Both chirp rates zero reduce A to the DFT.
#pragma once

#include "afdmim/types.hpp"

namespace afdmim {

struct DaftOperator {
  int size = 0;
  double c1 = 0.0;
  double c2 = 0.0;
  CMat forward;  // A
  CMat inverse;  // A^H
};

DaftOperator build_daft(int size, double c1, double c2);

// diag entries exp(-j*2*pi*rate*u^2), u = 0..size-1.
CVec chirp_diagonal(int size, double rate);

// DAF-domain symbols -> time-domain samples (applies A^H).
CVec idaft(const DaftOperator& op, const CVec& daf_symbols);

// Time-domain samples -> DAF-domain output (applies A).
CVec daft(const DaftOperator& op, const CVec& time_samples);

}  // namespace afdmim
