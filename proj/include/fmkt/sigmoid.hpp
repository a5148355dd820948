#pragma once

#include <cmath>
#include <stdexcept>

namespace fmkt {

// Saturating rate-utility curve U(R) = 1 - exp(-a * R / r_dem).
// U(0) = 0, strictly increasing, strictly concave, bounded below 1.
struct SigmoidUtility {
    double a = 1.0;      // satisfaction factor
    double r_dem = 1.0;  // traffic demand, Mb/s

    SigmoidUtility() = default;
    SigmoidUtility(double a_, double r_dem_) : a(a_), r_dem(r_dem_) {
        if (!(a > 0.0) || !(r_dem > 0.0))
            throw std::invalid_argument("SigmoidUtility: a and r_dem must be positive");
    }

    double value(double rate_mbps) const {
        if (rate_mbps < 0.0)
            throw std::domain_error("SigmoidUtility::value: negative rate");
        return 1.0 - std::exp(-a * rate_mbps / r_dem);
    }

    double slope(double rate_mbps) const {
        if (rate_mbps < 0.0)
            throw std::domain_error("SigmoidUtility::slope: negative rate");
        return (a / r_dem) * std::exp(-a * rate_mbps / r_dem);
    }
};

}  // namespace fmkt
