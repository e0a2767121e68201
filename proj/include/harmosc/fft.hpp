#pragma once

#include <span>
#include <vector>

#include "harmosc/polynomial.hpp"

namespace harmosc {

// Forward DFT X_k = Σ x_n e^{−2πjkn/N} of any length (FFTW backend).
std::vector<Complex> fft(std::span<const Complex> x);
std::vector<Complex> fft(std::span<const double> x);

// Inverse DFT including the 1/N factor.
std::vector<Complex> ifft(std::span<const Complex> x);

}  // namespace harmosc
