#include "fmkt/bids.hpp"

namespace fmkt {

namespace {
constexpr double kStructTol = 1e-12;
}

bool BidVector::is_convex(double tol) const {
    for (std::size_t n = 2; n < values.size(); ++n) {
        const double d_prev = values[n - 1] - values[n - 2];
        const double d_cur = values[n] - values[n - 1];
        if (d_cur < d_prev - tol) return false;
    }
    return true;
}

std::string BidValidation::message() const {
    switch (defect) {
        case BidDefect::none:
            return "valid";
        case BidDefect::empty:
            return "bid vector has no entries";
        case BidDefect::nonzero_anchor:
            return "bid vector not anchored at (0, 0)";
        case BidDefect::decreasing:
            return "bid values decrease at entry " + std::to_string(index);
        case BidDefect::non_convex:
            return "bid increments decrease at entry " + std::to_string(index);
    }
    return "unknown";
}

BidValidation validate_bid(const BidVector& bid, bool require_convex) {
    if (bid.values.empty()) return {BidDefect::empty, 0};
    if (bid.values[0] != 0.0) return {BidDefect::nonzero_anchor, 0};
    for (std::size_t n = 1; n < bid.values.size(); ++n) {
        if (bid.values[n] < bid.values[n - 1] - kStructTol)
            return {BidDefect::decreasing, static_cast<int>(n)};
    }
    if (require_convex) {
        for (std::size_t n = 2; n < bid.values.size(); ++n) {
            const double d_prev = bid.values[n - 1] - bid.values[n - 2];
            const double d_cur = bid.values[n] - bid.values[n - 1];
            if (d_cur < d_prev - kStructTol)
                return {BidDefect::non_convex, static_cast<int>(n)};
        }
    }
    return {};
}

}  // namespace fmkt
