#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace wavelink::detail {

using cvec = std::vector<std::complex<double>>;

// Unnormalized complex DFTs backed by FFTW. Plans are cached per size and
// shared across threads; execution is re-entrant.
void fft_forward(cvec& data);
void fft_inverse(cvec& data);  // no 1/n scaling

std::size_t next_pow2(std::size_t n);

}  // namespace wavelink::detail
