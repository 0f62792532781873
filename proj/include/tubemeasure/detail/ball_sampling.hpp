#pragma once

#include <span>

#include "tubemeasure/random.hpp"

namespace tubemeasure::detail {

/// Exact uniform draw from the closed unit ball. Rejection from the cube is
/// the cheapest exact method in low dimension; the Gaussian construction
/// stays in use above dimension 3 where rejection degrades. Either way the
/// acceptance-rate contract of the offset sampler is unchanged.
inline void sample_ball_fast(int dim, RandomStream& rng, std::span<double> out) {
    switch (dim) {
        case 1:
            out[0] = 2.0 * rng.next_double() - 1.0;
            return;
        case 2:
            for (;;) {
                const double x = 2.0 * rng.next_double() - 1.0;
                const double y = 2.0 * rng.next_double() - 1.0;
                if (x * x + y * y <= 1.0) {
                    out[0] = x;
                    out[1] = y;
                    return;
                }
            }
        case 3:
            for (;;) {
                const double x = 2.0 * rng.next_double() - 1.0;
                const double y = 2.0 * rng.next_double() - 1.0;
                const double z = 2.0 * rng.next_double() - 1.0;
                if (x * x + y * y + z * z <= 1.0) {
                    out[0] = x;
                    out[1] = y;
                    out[2] = z;
                    return;
                }
            }
        default:
            sample_unit_ball(dim, rng, out);
            return;
    }
}

} // namespace tubemeasure::detail
