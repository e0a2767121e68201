#pragma once

#include <cstddef>
#include <vector>

namespace harmosc {

// Uniformly sampled real time series; sample k is at t0 + k·dt.
struct Signal {
    double t0 = 0.0;
    double dt = 1.0;
    std::vector<double> samples;

    std::size_t size() const noexcept { return samples.size(); }
    double time(std::size_t k) const noexcept { return t0 + static_cast<double>(k) * dt; }
    double duration() const noexcept { return static_cast<double>(samples.size()) * dt; }
};

// Throws InvalidArgument unless dt > 0 and every sample is finite.
void check_signal(const Signal& s);

}  // namespace harmosc
