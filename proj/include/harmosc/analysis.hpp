#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "harmosc/polynomial.hpp"
#include "harmosc/signal.hpp"

namespace harmosc {

// z = y + j·H{y}; the real part is the input, bit for bit.
struct AnalyticSignal {
    double t0 = 0.0;
    double dt = 1.0;
    std::vector<Complex> samples;

    std::vector<double> envelope() const;
    std::vector<double> phase() const;  // unwrapped, radians
};

// FFT construction: positive bins doubled, negative bins zeroed, DC and
// Nyquist kept. Throws TooShort below 8 samples.
AnalyticSignal analytic(const Signal& signal);

/**
 * @brief Hann-windowed magnitude STFT.
 *
 * Row-major [frame][bin], one-sided. Magnitudes are amplitude-scaled
 * (2·|X_k| / Σw, DC and Nyquist without the factor 2), so a bin-centred
 * sinusoid of amplitude A reads A.
 */
struct Spectrogram {
    std::vector<double> times;        // frame centres, s
    std::vector<double> frequencies;  // Hz, bin k = k / (window_len·dt)
    std::vector<double> magnitudes;
    std::size_t window_len = 0;
    std::size_t hop = 0;
    double window_sum = 0.0;     // Σw
    double window_energy = 0.0;  // Σw²

    std::size_t frames() const noexcept { return times.size(); }
    std::size_t bins() const noexcept { return frequencies.size(); }
    double at(std::size_t frame, std::size_t bin) const { return magnitudes[frame * bins() + bin]; }
    std::size_t bin_of(double frequency_hz) const;
};

Spectrogram spectrogram(const Signal& signal, std::size_t window_len, std::size_t hop);

struct Ridge {
    double frequency_hz = 0.0;  // log-parabolic interpolated
    std::size_t bin = 0;
    double peak_magnitude = 0.0;
    std::size_t peak_frame = 0;
};

// Local maxima (excluding DC) of the per-bin maximum over all frames that
// reach rel_threshold of the strongest one.
std::vector<Ridge> find_ridges(const Spectrogram& spec, double rel_threshold = 0.1);

struct SteadyEstimate {
    double f_hz = 0.0;
    double omega = 0.0;      // 2π·f_hz
    double amplitude = 0.0;
    double bias = 0.0;
    // y ≈ bias + cos_coeff·cos(ωt) + sin_coeff·sin(ωt), t absolute
    double cos_coeff = 0.0;
    double sin_coeff = 0.0;
    double fit_start = 0.0;  // s
};

/**
 * Drops the first `discard` seconds, locates the dominant line by a
 * log-parabolic interpolated peak of the zero-padded Hann spectrum, then
 * refines frequency, amplitude, phase and bias with a four-parameter
 * least-squares sine fit. Throws WindowTooShort when fewer than five periods
 * remain.
 */
SteadyEstimate estimate_steady(const Signal& signal, double discard);

struct DecayEstimate {
    double tau = 0.0;                         // s
    std::optional<double> transient_f_hz;
    double initial_envelope = 0.0;            // fitted envelope at t0
    double fit_start = 0.0;
    double fit_end = 0.0;
    Signal residual;                          // signal minus the steady model
    std::vector<double> residual_envelope;
};

// Throws NoTransient when the residual never rises above 3x its tail floor.
DecayEstimate estimate_decay(const Signal& signal, const SteadyEstimate& steady);

struct OscillationReport {
    SteadyEstimate steady;
    std::optional<DecayEstimate> decay;
    std::vector<std::string> flags;
};

}  // namespace harmosc
