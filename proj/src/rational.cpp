#include "diamondlab/rational.hpp"

#include <cmath>

namespace diamondlab {

Rational rational_from_double(double v) {
    if (!std::isfinite(v)) throw std::domain_error("rational_from_double: non-finite");
    int e = 0;
    double m = std::frexp(v, &e);            // v = m * 2^e, |m| in [0.5, 1)
    std::int64_t mi = (std::int64_t)std::llround(std::ldexp(m, 53));
    e -= 53;                                  // v = mi * 2^e exactly
    while (mi != 0 && (mi & 1) == 0) { mi >>= 1; ++e; }
    if (mi == 0) return Rational(0);
    if (e >= 0 && e <= 10) return Rational(Rational::checked((__int128)mi << e), 1);
    if (e < 0 && -e <= 62) return Rational(mi, (std::int64_t)1 << (-e));
    // Not exactly representable: snap to a 2^-40 grid.
    const double scale = 1099511627776.0;     // 2^40
    double k = std::nearbyint(v * scale);
    return Rational((std::int64_t)k, (std::int64_t)scale);
}

}  // namespace diamondlab
