#pragma once

#include <span>

namespace fmkt {

struct Aggregate {
    std::size_t count = 0;
    double mean = 0.0;
    double stddev = 0.0;     // sample standard deviation
    double ci95_half = 0.0;  // normal-approximation half width
};

// Throws std::invalid_argument on empty input.
Aggregate aggregate(std::span<const double> samples);

// Spearman rank correlation with average ranks for ties. Requires at
// least two samples per series.
double spearman_rho(std::span<const double> x, std::span<const double> y);

}  // namespace fmkt
