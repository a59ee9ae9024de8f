#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace obench {

/// Unnormalized forward DFT, X[k] = sum_n x[n] exp(-2 pi i k n / N).
std::vector<std::complex<double>> dft_1d(std::span<const double> x);

/// Unnormalized forward 2-D DFT of a row-major rows x cols real array.
std::vector<std::complex<double>> dft_2d(std::span<const double> x, std::size_t rows, std::size_t cols);

/// Unnormalized inverse 2-D DFT (complex input), real part returned.
std::vector<double> idft_2d_real(std::span<const std::complex<double>> X, std::size_t rows, std::size_t cols);

}  // namespace obench
