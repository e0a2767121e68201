#include "harmosc/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <mutex>

namespace harmosc {

namespace {

// The FFTW planner is not thread-safe; execution on a private plan is.
std::mutex planner_mutex;

struct FftwFree {
    void operator()(fftw_complex* p) const { fftw_free(p); }
};
using Buffer = std::unique_ptr<fftw_complex[], FftwFree>;

Buffer allocate(std::size_t n) {
    return Buffer(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * std::max<std::size_t>(n, 1))));
}

std::vector<Complex> transform(std::span<const Complex> x, int sign) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    Buffer in = allocate(n);
    Buffer out = allocate(n);
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex);
        plan = fftw_plan_dft_1d(static_cast<int>(n), in.get(), out.get(), sign, FFTW_ESTIMATE);
    }
    for (std::size_t i = 0; i < n; ++i) {
        in[i][0] = x[i].real();
        in[i][1] = x[i].imag();
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex);
        fftw_destroy_plan(plan);
    }
    std::vector<Complex> result(n);
    for (std::size_t i = 0; i < n; ++i) result[i] = Complex(out[i][0], out[i][1]);
    return result;
}

}  // namespace

std::vector<Complex> fft(std::span<const Complex> x) { return transform(x, FFTW_FORWARD); }

std::vector<Complex> fft(std::span<const double> x) {
    std::vector<Complex> c(x.begin(), x.end());
    return transform(c, FFTW_FORWARD);
}

std::vector<Complex> ifft(std::span<const Complex> x) {
    std::vector<Complex> r = transform(x, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(x.size());
    for (Complex& v : r) v *= scale;
    return r;
}

}  // namespace harmosc
