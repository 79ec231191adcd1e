#pragma once

#include <complex>
#include <span>

namespace curveflow::fft {

// Real-to-half-complex transform of length n = in.size(); out holds n/2 + 1
// coefficients normalized so that out[k] = (1/n) sum_j in[j] exp(-2 pi i jk/n).
void forward(std::span<const double> in, std::span<std::complex<double>> out);

// Inverse of forward(): out[j] = sum_k c_k exp(2 pi i jk/n) with Hermitian
// extension of the n/2 + 1 stored coefficients.
void inverse(std::span<const std::complex<double>> in, std::span<double> out);

}  // namespace curveflow::fft
