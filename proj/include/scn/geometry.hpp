#pragma once

#include <cmath>
#include <vector>

#include "scn/rng.hpp"

namespace scn {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double dist2(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

inline double dist(const Point& a, const Point& b) { return std::sqrt(dist2(a, b)); }

// Immutable node placement: SBS and UE positions in a disk around the origin,
// plus the service threshold distance.
struct Deployment {
    std::vector<Point> sbs;
    std::vector<Point> ue;
    double r_th = 0.0;
    double region_radius = 0.0;

    // Throws std::invalid_argument on violated invariants.
    void validate() const;
};

enum class OverlapCase { I, II, III };

// Areas for the two-UE orientation around an SBS at the origin. All three
// circles have radius r_th; a_o* are the UE/origin overlaps, a_e* the
// exclusion areas outside the origin disk, a_t the triple overlap.
// `constituent` partitions the origin disk (4 parts for cases I/II, 3 for III).
struct TwoUeAreas {
    OverlapCase case_id = OverlapCase::I;
    double a_ec = 0.0;
    double a_o1 = 0.0;
    double a_o2 = 0.0;
    double a_e1 = 0.0;
    double a_e2 = 0.0;
    double a_t = 0.0;
    std::vector<double> constituent;
};

// Intersection area of two circles of equal radius r_th whose centers are r
// apart. Valid for 0 <= r <= 2*r_th.
double lens_area(double r, double r_th);

// pi*r_th^2 - lens_area(r, r_th), for 0 <= r <= r_th.
double exclusion_area(double r, double r_th);

// Common overlap of three circles of radius r_th centered at the origin,
// (r1, 0) and (r2*cos(phi), r2*sin(phi)).
double triple_overlap_area(double r1, double r2, double phi, double r_th);

// Classifies the two-UE orientation and returns all overlap/exclusion areas.
// r1, r2 in [0, r_th]; phi in [0, pi].
TwoUeAreas two_ue_areas(double r1, double r2, double phi, double r_th);

// Homogeneous Poisson point process in a disk of the given radius centered at
// the origin. density in points per m^2.
std::vector<Point> sample_hppp(double density, double region_radius, RandomStream& rng);

} // namespace scn
