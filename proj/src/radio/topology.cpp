#include "fmkt/radio/topology.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace fmkt {

bool Apartment::contains(const Point& p) const {
    return p.x >= x0 && p.x <= x0 + kApartmentSide && p.y >= y0 && p.y <= y0 + kApartmentSide;
}

int Topology::apartment_of(const Point& p) const {
    for (std::size_t k = 0; k < apartments.size(); ++k)
        if (apartments[k].contains(p)) return static_cast<int>(k);
    return -1;
}

double distance(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

Topology generate_topology(double density, int num_mues, std::uint64_t seed) {
    if (density < 0.0 || density > 1.0)
        throw std::invalid_argument("generate_topology: density outside [0, 1]");
    if (num_mues < 1)
        throw std::invalid_argument("generate_topology: need at least one MUE");

    Topology topo;
    topo.apartments.reserve(kApartmentCount);
    for (int k = 0; k < kApartmentsPerSide; ++k)
        topo.apartments.push_back({k * kApartmentSide, kRoadHalfWidth});
    for (int k = 0; k < kApartmentsPerSide; ++k)
        topo.apartments.push_back({k * kApartmentSide, -kRoadHalfWidth - kApartmentSide});
    topo.macro_bs = {kRoadLength / 2.0, kMacroNorthOffset};

    std::mt19937_64 rng(seed);
    std::bernoulli_distribution has_femto(density);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (int k = 0; k < kApartmentCount; ++k) {
        if (!has_femto(rng)) continue;
        const Apartment& apt = topo.apartments[static_cast<std::size_t>(k)];
        topo.femto_apartment.push_back(k);
        topo.femto_positions.push_back(
            {apt.x0 + unit(rng) * kApartmentSide, apt.y0 + unit(rng) * kApartmentSide});
        std::array<Point, kFuesPerFemto> fues;
        for (Point& fue : fues)
            fue = {apt.x0 + unit(rng) * kApartmentSide, apt.y0 + unit(rng) * kApartmentSide};
        topo.fue_positions.push_back(fues);
    }
    topo.mue_positions.reserve(static_cast<std::size_t>(num_mues));
    for (int m = 0; m < num_mues; ++m)
        topo.mue_positions.push_back({unit(rng) * kRoadLength, 0.0});
    return topo;
}

}  // namespace fmkt
