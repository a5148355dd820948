#include "fmkt/valuation.hpp"

#include <algorithm>
#include <stdexcept>

namespace fmkt {

double FemtoValuationModel::value(int n) const {
    if (n < 0 || n > slots_per_round)
        throw std::domain_error("FemtoValuationModel::value: slot count outside [0, T]");
    if (fue_utilities.size() != fue_rates.size())
        throw std::invalid_argument("FemtoValuationModel: utilities/rates size mismatch");
    if (n == 0) return 0.0;
    const double keep = static_cast<double>(slots_per_round - n) / slots_per_round;
    const double share = fue_rates.empty() ? 0.0 : 1.0 / static_cast<double>(fue_rates.size());
    double loss = 0.0;
    for (std::size_t k = 0; k < fue_rates.size(); ++k) {
        const double base_rate = fue_rates[k] * share;
        loss += fue_utilities[k].value(base_rate) - fue_utilities[k].value(base_rate * keep);
    }
    return loss;
}

BidVector FemtoValuationModel::truthful_bid(int max_slots) const {
    if (max_slots < 0 || max_slots > slots_per_round)
        throw std::domain_error("FemtoValuationModel::truthful_bid: max_slots outside [0, T]");
    BidVector bid;
    bid.values.reserve(static_cast<std::size_t>(max_slots) + 1);
    for (int n = 0; n <= max_slots; ++n) bid.values.push_back(value(n));
    return bid;
}

double MueValuationModel::value_single(const std::vector<int>& slots) const {
    if (slots.size() != link_rates.size())
        throw std::invalid_argument("MueValuationModel::value_single: allocation size mismatch");
    double aggregate = 0.0;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i] < 0)
            throw std::domain_error("MueValuationModel::value_single: negative slot count");
        aggregate += static_cast<double>(slots[i]) * link_rates[i];
    }
    return utility.value(aggregate / slots_per_round) - utility.value(macro_rate);
}

double MueValuationModel::value_pair(std::size_t j, int k) const {
    if (j >= link_rates.size())
        throw std::out_of_range("MueValuationModel::value_pair: unknown femtocell");
    if (k < 0 || k > slots_per_round)
        throw std::domain_error("MueValuationModel::value_pair: slot count outside [0, T]");
    if (k == 0) return 0.0;
    const double rate = static_cast<double>(k) * link_rates[j] / slots_per_round;
    return utility.value(rate) - utility.value(macro_rate);
}

BidVector MueValuationModel::truthful_bid(std::size_t j, int max_slots) const {
    BidVector bid;
    bid.values.reserve(static_cast<std::size_t>(max_slots) + 1);
    for (int k = 0; k <= max_slots; ++k)
        bid.values.push_back(std::max(0.0, value_pair(j, k)));
    return bid;
}

}  // namespace fmkt
