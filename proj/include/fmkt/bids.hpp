#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fmkt {

// Price schedule over leased-slot counts. values[n] is the price for n
// slots; a well-formed vector is anchored at values[0] == 0 and
// nondecreasing. Convexity (nondecreasing increments) is additionally
// required where the greedy winner determination is used.
struct BidVector {
    std::vector<double> values;

    BidVector() = default;
    explicit BidVector(std::vector<double> v) : values(std::move(v)) {}

    int max_slots() const { return static_cast<int>(values.size()) - 1; }

    double at(int n) const { return values.at(static_cast<std::size_t>(n)); }

    BidVector scaled(double factor) const {
        BidVector out = *this;
        for (double& v : out.values) v *= factor;
        return out;
    }

    bool is_convex(double tol = 1e-12) const;
};

enum class BidDefect {
    none,
    empty,
    nonzero_anchor,
    decreasing,
    non_convex,
};

struct BidValidation {
    BidDefect defect = BidDefect::none;
    int index = -1;  // first offending entry, -1 when valid

    bool ok() const { return defect == BidDefect::none; }
    std::string message() const;
};

// Structural check: (0,0) anchor, monotone values, optionally convex
// increments. Reports the first offending index.
BidValidation validate_bid(const BidVector& bid, bool require_convex);

}  // namespace fmkt
