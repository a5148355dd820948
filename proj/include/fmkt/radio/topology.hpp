#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace fmkt {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// Axis-aligned apartment square; side kApartmentSide.
struct Apartment {
    double x0 = 0.0;
    double y0 = 0.0;

    bool contains(const Point& p) const;
};

inline constexpr double kRoadLength = 240.0;
inline constexpr double kApartmentSide = 15.0;
inline constexpr int kApartmentsPerSide = 16;  // 240 / 15
inline constexpr int kApartmentCount = 2 * kApartmentsPerSide;
inline constexpr double kRoadHalfWidth = 5.0;   // apartment setback from the centerline
inline constexpr double kMacroNorthOffset = 300.0;
inline constexpr int kFuesPerFemto = 3;

// Street scenario: a 240 m road with 16 apartments along each side, a
// macro BS 300 m north of the area center, MUEs on the road centerline.
struct Topology {
    std::vector<Apartment> apartments;         // fixed 32, north row then south row
    std::vector<int> femto_apartment;          // apartment index per femtocell
    std::vector<Point> femto_positions;
    std::vector<std::array<Point, kFuesPerFemto>> fue_positions;  // per femtocell
    std::vector<Point> mue_positions;
    Point macro_bs;

    std::size_t num_femtos() const { return femto_positions.size(); }
    std::size_t num_mues() const { return mue_positions.size(); }

    // Apartment containing p, or -1 when p is outdoors.
    int apartment_of(const Point& p) const;
};

// Each apartment independently hosts a femtocell with probability
// `density`; femtocell and its 3 FUEs are placed uniformly inside the
// apartment, MUEs uniformly along the road. Deterministic under seed.
Topology generate_topology(double density, int num_mues, std::uint64_t seed);

double distance(const Point& a, const Point& b);

}  // namespace fmkt
