#include "harmosc/signal.hpp"

#include <cmath>

#include "harmosc/error.hpp"

namespace harmosc {

void check_signal(const Signal& s) {
    if (!(s.dt > 0.0) || !std::isfinite(s.dt)) throw Error(ErrorCode::InvalidArgument, "signal dt must be positive");
    for (double v : s.samples) {
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "signal contains non-finite samples");
    }
}

}  // namespace harmosc
