#include "harmosc/analysis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "harmosc/error.hpp"
#include "harmosc/fft.hpp"

namespace harmosc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> hann(std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(n));
    }
    return w;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// In-place analytic mask on a full spectrum.
void analytic_mask(std::vector<Complex>& spectrum) {
    const std::size_t n = spectrum.size();
    const std::size_t half = n / 2;
    for (std::size_t k = 1; k < n; ++k) {
        if (n % 2 == 0 && k == half) continue;
        if (k <= (n - 1) / 2) {
            spectrum[k] *= 2.0;
        } else {
            spectrum[k] = 0.0;
        }
    }
}

// Vertex of the parabola through three log magnitudes: (offset, log peak).
std::pair<double, double> log_parabola(double left, double centre, double right) {
    const double a = std::log(std::max(left, 1e-300));
    const double b = std::log(std::max(centre, 1e-300));
    const double c = std::log(std::max(right, 1e-300));
    const double denom = a - 2.0 * b + c;
    if (denom >= 0.0) return {0.0, b};
    const double delta = 0.5 * (a - c) / denom;
    return {delta, b - 0.25 * (a - c) * delta};
}

}  // namespace

std::vector<double> AnalyticSignal::envelope() const {
    std::vector<double> env(samples.size());
    std::transform(samples.begin(), samples.end(), env.begin(), [](Complex z) { return std::abs(z); });
    return env;
}

std::vector<double> AnalyticSignal::phase() const {
    std::vector<double> ph(samples.size());
    double offset = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double raw = std::arg(samples[i]);
        if (i > 0) {
            const double jump = raw + offset - ph[i - 1];
            if (jump > std::numbers::pi) offset -= kTwoPi * std::round(jump / kTwoPi);
            if (jump < -std::numbers::pi) offset -= kTwoPi * std::round(jump / kTwoPi);
        }
        ph[i] = raw + offset;
    }
    return ph;
}

AnalyticSignal analytic(const Signal& signal) {
    check_signal(signal);
    if (signal.size() < 8) throw Error(ErrorCode::TooShort, "analytic signal needs at least 8 samples");

    std::vector<Complex> spectrum = fft(std::span<const double>(signal.samples));
    analytic_mask(spectrum);
    AnalyticSignal out{signal.t0, signal.dt, ifft(spectrum)};
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        out.samples[i] = Complex(signal.samples[i], out.samples[i].imag());
    }
    return out;
}

std::size_t Spectrogram::bin_of(double frequency_hz) const {
    if (frequencies.size() < 2) return 0;
    const double df = frequencies[1] - frequencies[0];
    const auto k = static_cast<long long>(std::llround(frequency_hz / df));
    return static_cast<std::size_t>(std::clamp<long long>(k, 0, static_cast<long long>(frequencies.size()) - 1));
}

Spectrogram spectrogram(const Signal& signal, std::size_t window_len, std::size_t hop) {
    check_signal(signal);
    if (hop < 1) throw Error(ErrorCode::InvalidArgument, "hop must be >= 1");
    if (window_len < 2) throw Error(ErrorCode::InvalidArgument, "window must hold at least 2 samples");
    if (window_len > signal.size()) {
        throw Error(ErrorCode::WindowTooLong, "window of " + std::to_string(window_len) +
                                                  " samples exceeds signal length " +
                                                  std::to_string(signal.size()));
    }

    Spectrogram out;
    out.window_len = window_len;
    out.hop = hop;
    const std::vector<double> w = hann(window_len);
    for (double v : w) {
        out.window_sum += v;
        out.window_energy += v * v;
    }
    const std::size_t bins = window_len / 2 + 1;
    const std::size_t frames = 1 + (signal.size() - window_len) / hop;
    for (std::size_t k = 0; k < bins; ++k) {
        out.frequencies.push_back(static_cast<double>(k) / (static_cast<double>(window_len) * signal.dt));
    }
    out.magnitudes.reserve(frames * bins);

    std::vector<double> frame(window_len);
    for (std::size_t f = 0; f < frames; ++f) {
        const std::size_t start = f * hop;
        out.times.push_back(signal.time(start) + static_cast<double>(window_len / 2) * signal.dt);
        for (std::size_t i = 0; i < window_len; ++i) frame[i] = w[i] * signal.samples[start + i];
        const std::vector<Complex> spectrum = fft(std::span<const double>(frame));
        for (std::size_t k = 0; k < bins; ++k) {
            const bool edge = k == 0 || (window_len % 2 == 0 && k == window_len / 2);
            out.magnitudes.push_back((edge ? 1.0 : 2.0) * std::abs(spectrum[k]) / out.window_sum);
        }
    }
    return out;
}

std::vector<Ridge> find_ridges(const Spectrogram& spec, double rel_threshold) {
    const std::size_t bins = spec.bins();
    std::vector<double> hold(bins, 0.0);
    std::vector<std::size_t> hold_frame(bins, 0);
    for (std::size_t f = 0; f < spec.frames(); ++f) {
        for (std::size_t k = 0; k < bins; ++k) {
            if (spec.at(f, k) > hold[k]) {
                hold[k] = spec.at(f, k);
                hold_frame[k] = f;
            }
        }
    }
    double strongest = 0.0;
    for (std::size_t k = 1; k < bins; ++k) strongest = std::max(strongest, hold[k]);

    std::vector<Ridge> ridges;
    if (strongest == 0.0 || bins < 3) return ridges;
    const double df = spec.frequencies[1] - spec.frequencies[0];
    for (std::size_t k = 1; k + 1 < bins; ++k) {
        if (hold[k] > hold[k - 1] && hold[k] >= hold[k + 1] && hold[k] >= rel_threshold * strongest) {
            const auto [delta, log_peak] = log_parabola(hold[k - 1], hold[k], hold[k + 1]);
            ridges.push_back({(static_cast<double>(k) + delta) * df, k, std::exp(log_peak), hold_frame[k]});
        }
    }
    return ridges;
}

SteadyEstimate estimate_steady(const Signal& signal, double discard) {
    check_signal(signal);
    if (!(discard >= 0.0)) throw Error(ErrorCode::InvalidArgument, "discard must be non-negative");
    const auto start = static_cast<std::size_t>(std::ceil(discard / signal.dt - 1e-9));
    if (start + 8 > signal.size()) {
        throw Error(ErrorCode::WindowTooShort, "nothing left after discarding the transient");
    }
    const std::size_t m = signal.size() - start;
    const std::span<const double> seg(signal.samples.data() + start, m);
    const double span_s = static_cast<double>(m) * signal.dt;

    const std::vector<double> w = hann(m);
    double wsum = 0.0;
    double weighted = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        wsum += w[i];
        weighted += w[i] * seg[i];
    }
    const double bias0 = weighted / wsum;

    const std::size_t nfft = next_pow2(4 * m);
    std::vector<double> padded(nfft, 0.0);
    for (std::size_t i = 0; i < m; ++i) padded[i] = w[i] * (seg[i] - bias0);
    const std::vector<Complex> spectrum = fft(std::span<const double>(padded));
    std::vector<double> mag(nfft / 2);
    for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::abs(spectrum[k]);

    // Skip the Hann main lobe around DC.
    const std::size_t kmin = std::max<std::size_t>(1, 2 * nfft / m);
    if (kmin + 2 >= mag.size()) throw Error(ErrorCode::WindowTooShort, "window too short for a spectral peak");
    const std::size_t kpeak = static_cast<std::size_t>(
        std::max_element(mag.begin() + static_cast<std::ptrdiff_t>(kmin), mag.end() - 1) - mag.begin());
    if (mag[kpeak] == 0.0) throw Error(ErrorCode::WindowTooShort, "signal has no oscillating component");
    const double delta = log_parabola(mag[kpeak - 1], mag[kpeak], mag[kpeak + 1]).first;
    const double f0 = (static_cast<double>(kpeak) + delta) / (static_cast<double>(nfft) * signal.dt);

    if (f0 * span_s < 5.0) {
        throw Error(ErrorCode::WindowTooShort, "fewer than five periods remain after the discard");
    }

    // Four-parameter sine fit (bias, cos, sin, ω) around the segment midpoint.
    const double t_mid = signal.time(start) + 0.5 * static_cast<double>(m - 1) * signal.dt;
    Eigen::VectorXd y(static_cast<Eigen::Index>(m));
    Eigen::VectorXd tau(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
        y(static_cast<Eigen::Index>(i)) = seg[i];
        tau(static_cast<Eigen::Index>(i)) = signal.time(start + i) - t_mid;
    }
    auto linear_fit = [&](double omega) {
        Eigen::MatrixXd basis(static_cast<Eigen::Index>(m), 3);
        basis.col(0).setOnes();
        basis.col(1) = (omega * tau).array().cos();
        basis.col(2) = (omega * tau).array().sin();
        return Eigen::Vector3d(basis.colPivHouseholderQr().solve(y));
    };

    const double omega0 = kTwoPi * f0;
    double omega = omega0;
    Eigen::Vector3d lin = linear_fit(omega);
    for (int iter = 0; iter < 30; ++iter) {
        const Eigen::ArrayXd c = (omega * tau).array().cos();
        const Eigen::ArrayXd s = (omega * tau).array().sin();
        Eigen::MatrixXd jac(static_cast<Eigen::Index>(m), 4);
        jac.col(0).setOnes();
        jac.col(1) = c.matrix();
        jac.col(2) = s.matrix();
        jac.col(3) = (tau.array() * (-lin(1) * s + lin(2) * c)).matrix();
        const Eigen::VectorXd model = (lin(0) + lin(1) * c + lin(2) * s).matrix();
        const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(y - model);
        lin += step.head<3>();
        omega += step(3);
        if (std::abs(step(3)) <= 1e-15 * omega) break;
    }
    if (!std::isfinite(omega) || std::abs(omega - omega0) > kTwoPi * 2.0 / span_s) {
        // Refinement wandered off the spectral peak; keep the interpolated estimate.
        omega = omega0;
        lin = linear_fit(omega);
    }

    SteadyEstimate est;
    est.omega = omega;
    est.f_hz = omega / kTwoPi;
    est.bias = lin(0);
    est.amplitude = std::hypot(lin(1), lin(2));
    const double cm = std::cos(omega * t_mid);
    const double sm = std::sin(omega * t_mid);
    est.cos_coeff = lin(1) * cm - lin(2) * sm;
    est.sin_coeff = lin(1) * sm + lin(2) * cm;
    est.fit_start = signal.time(start);
    return est;
}

namespace {

// Cosine-tapered high-pass below `cutoff_hz`, applied on a twice zero-padded
// spectrum. Returns the filtered padded signal.
Signal highpass_padded(const Signal& signal, double cutoff_hz) {
    const std::size_t n = signal.size();
    const std::size_t m = 2 * n;
    std::vector<double> padded(m, 0.0);
    std::copy(signal.samples.begin(), signal.samples.end(), padded.begin());
    std::vector<Complex> spectrum = fft(std::span<const double>(padded));
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t folded = std::min(k, m - k);
        const double f = static_cast<double>(folded) / (static_cast<double>(m) * signal.dt);
        if (f < cutoff_hz) spectrum[k] *= 0.5 - 0.5 * std::cos(std::numbers::pi * f / cutoff_hz);
    }
    const std::vector<Complex> filtered = ifft(spectrum);
    Signal out{signal.t0, signal.dt, std::vector<double>(m)};
    for (std::size_t k = 0; k < m; ++k) out.samples[k] = filtered[k].real();
    return out;
}

}  // namespace

DecayEstimate estimate_decay(const Signal& signal, const SteadyEstimate& steady) {
    check_signal(signal);
    const std::size_t n = signal.size();
    if (n < 40) throw Error(ErrorCode::TooShort, "signal too short for decay estimation");

    DecayEstimate out;
    out.residual = Signal{signal.t0, signal.dt, std::vector<double>(n)};
    double scale = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = signal.time(k);
        const double model =
            steady.bias + steady.cos_coeff * std::cos(steady.omega * t) + steady.sin_coeff * std::sin(steady.omega * t);
        out.residual.samples[k] = signal.samples[k] - model;
        scale = std::max(scale, std::abs(signal.samples[k]));
    }

    // The dominant transient line sets the high-pass cutoff; the slow lump
    // below it would otherwise leak a 1/t tail into the Hilbert envelope.
    const std::size_t m = 2 * n;
    std::vector<double> padded(m, 0.0);
    std::copy(out.residual.samples.begin(), out.residual.samples.end(), padded.begin());
    const std::vector<Complex> spectrum = fft(std::span<const double>(padded));
    std::size_t kpeak = 6;
    for (std::size_t k = 6; k < m / 2; ++k) {
        if (std::abs(spectrum[k]) > std::abs(spectrum[kpeak])) kpeak = k;
    }
    const double cutoff = 0.5 * static_cast<double>(kpeak) / (static_cast<double>(m) * signal.dt);
    const AnalyticSignal z = analytic(highpass_padded(out.residual, cutoff));
    const std::vector<double> env_full = z.envelope();
    out.residual_envelope.assign(env_full.begin(), env_full.begin() + static_cast<std::ptrdiff_t>(n));

    const std::size_t trim = n / 20;
    const std::size_t tail_begin = 3 * n / 4;
    double floor = 1e-6 * scale;
    for (std::size_t k = tail_begin; k < n - trim; ++k) {
        floor = std::max({floor, out.residual_envelope[k], std::abs(out.residual.samples[k])});
    }
    double peak = 0.0;
    for (std::size_t k = trim; k < n - trim; ++k) peak = std::max(peak, std::abs(out.residual.samples[k]));
    if (peak <= 3.0 * floor) {
        throw Error(ErrorCode::NoTransient, "residual stays within the tail noise floor");
    }

    std::size_t end = trim;
    while (end < n - trim && out.residual_envelope[end] > 3.0 * floor) ++end;
    if (end - trim < 16) throw Error(ErrorCode::NoTransient, "transient too short to fit");

    // Points where the waveform touches its envelope: local maxima of |r|
    // above 3x the tail level of |r|. Low-Q transients leave a slow algebraic
    // tail in the Hilbert envelope, but not in these samples.
    double r_floor = 1e-6 * scale;
    for (std::size_t k = tail_begin; k < n - trim; ++k) r_floor = std::max(r_floor, std::abs(out.residual.samples[k]));
    std::vector<std::size_t> touch;
    for (std::size_t k = std::max<std::size_t>(trim, 1); k + 1 < n - trim; ++k) {
        const double a = std::abs(out.residual.samples[k]);
        if (a < std::abs(out.residual.samples[k - 1]) || a <= std::abs(out.residual.samples[k + 1])) continue;
        if (a <= 3.0 * r_floor) {
            if (!touch.empty()) break;
            continue;
        }
        touch.push_back(k);
    }

    auto fit = [](const std::vector<double>& x, const std::vector<double>& y) {
        double sx = 0.0, sxx = 0.0, sy = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            sx += x[i];
            sxx += x[i] * x[i];
            sy += y[i];
            sxy += x[i] * y[i];
        }
        const double count = static_cast<double>(x.size());
        const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
        return std::pair{slope, (sy - slope * sx) / count};
    };

    std::vector<double> ts;
    std::vector<double> logs;
    if (touch.size() >= 2) {
        for (std::size_t k : touch) {
            ts.push_back(signal.time(k));
            logs.push_back(std::log(std::abs(out.residual.samples[k])));
        }
        end = std::max(end, touch.back() + 1);
    } else {
        for (std::size_t k = trim; k < end; ++k) {
            ts.push_back(signal.time(k));
            logs.push_back(std::log(out.residual_envelope[k]));
        }
    }
    const auto [slope, intercept] = fit(ts, logs);
    if (!(slope < 0.0)) throw Error(ErrorCode::NoTransient, "residual envelope is not decaying");

    const std::vector<double> phase = z.phase();
    std::vector<double> tp;
    std::vector<double> pp;
    for (std::size_t k = trim; k < end; ++k) {
        tp.push_back(signal.time(k));
        pp.push_back(phase[k]);
    }
    const double phase_rate = fit(tp, pp).first;

    out.tau = -1.0 / slope;
    out.initial_envelope = std::exp(intercept + slope * signal.t0);
    out.fit_start = signal.time(trim);
    out.fit_end = signal.time(end - 1);
    const double transient_f = std::abs(phase_rate) / kTwoPi;
    if (transient_f * (out.fit_end - out.fit_start) >= 1.0) out.transient_f_hz = transient_f;
    return out;
}

}  // namespace harmosc
