#pragma once

#include <cmath>

namespace sdht {

/// Identifiers live on the unit ring (0, 1].
///
/// The default distance wraps around the ring, so 0.01 and 0.99 are 0.02
/// apart. With `literal_abs` the plain |a - b| is returned instead.
inline double circular_distance(double a, double b, bool literal_abs = false) {
    const double delta = std::fabs(a - b);
    if (literal_abs) return delta;
    return delta < 1.0 - delta ? delta : 1.0 - delta;
}

/// Clockwise distance from a to b in [0, 1).
inline double clockwise_distance(double a, double b) {
    const double delta = b - a;
    return delta >= 0.0 ? delta : delta + 1.0;
}

/// Map a point back into (0, 1] after adding an offset.
inline double wrap_identifier(double x) {
    x = x - std::floor(x);
    return x == 0.0 ? 1.0 : x;
}

}  // namespace sdht
