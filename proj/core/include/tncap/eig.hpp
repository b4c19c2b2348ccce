#pragma once

#include <complex>
#include <vector>

#include "tncap/matrix.hpp"

namespace tncap::eig {

// All eigenvalues of a real square matrix: Householder Hessenberg reduction
// followed by Francis double-shift QR. Sized for MAC state spaces.
std::vector<std::complex<double>> eigenvalues(Matrix a);

// Eigenvalue of maximal real part. Metzler matrices (nonnegative
// off-diagonals, the shape of Q - theta*C*I_j) take a Perron power iteration
// on B + sigma*I whose dominant eigenvalue is real and bracketed by the
// Collatz-Wielandt bounds; anything else, or a non-converging iteration,
// falls back to the QR spectrum.
double max_real_eig(const Matrix& b);

}  // namespace tncap::eig
