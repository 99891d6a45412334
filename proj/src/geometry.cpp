#include "scn/geometry.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace scn {
namespace {

// Relative slack for on-boundary classification. The area formulas of
// adjacent cases agree on the shared boundary, so the label chosen there
// never changes an area.
constexpr double kBoundaryEps = 1e-9;

struct PointPair {
    Point a;
    Point b;
};

// Intersection points of two radius-R circles whose centers are d apart,
// 0 < d. For d >= 2R both points collapse onto the midpoint.
PointPair circle_pair_points(const Point& c1, const Point& c2, double d, double R) {
    const double mx = 0.5 * (c1.x + c2.x);
    const double my = 0.5 * (c1.y + c2.y);
    const double h2 = R * R - 0.25 * d * d;
    const double h = h2 > 0.0 ? std::sqrt(h2) : 0.0;
    const double ux = -(c2.y - c1.y) / d;
    const double uy = (c2.x - c1.x) / d;
    return {{mx + h * ux, my + h * uy}, {mx - h * ux, my - h * uy}};
}

bool inside(const Point& p, const Point& center, double R) {
    return dist(p, center) <= R * (1.0 + kBoundaryEps);
}

const Point& pick_closer(const PointPair& pp, const Point& center) {
    return dist2(pp.a, center) <= dist2(pp.b, center) ? pp.a : pp.b;
}

// Minor circular segment cut by a chord of the given length on a radius-R
// circle. All bounding arcs of the triple overlap are minor arcs because the
// region is an intersection of disks whose centers it separates by less
// than R.
double segment_area(double chord, double R) {
    const double s = std::clamp(chord / (2.0 * R), 0.0, 1.0);
    const double theta = 2.0 * std::asin(s);
    return 0.5 * R * R * (theta - std::sin(theta));
}

double triangle_area(const Point& a, const Point& b, const Point& c) {
    return 0.5 * std::abs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

} // namespace

void Deployment::validate() const {
    if (!(r_th > 0.0) || !std::isfinite(r_th))
        throw std::invalid_argument("Deployment: r_th must be positive and finite");
    if (!(region_radius > 0.0) || !std::isfinite(region_radius))
        throw std::invalid_argument("Deployment: region_radius must be positive and finite");
    const double lim = region_radius * (1.0 + kBoundaryEps);
    auto check = [&](const std::vector<Point>& pts, const char* what) {
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (!std::isfinite(pts[i].x) || !std::isfinite(pts[i].y))
                throw std::invalid_argument(std::string("Deployment: non-finite ") + what +
                                            " coordinate at index " + std::to_string(i));
            if (std::sqrt(pts[i].x * pts[i].x + pts[i].y * pts[i].y) > lim)
                throw std::invalid_argument(std::string("Deployment: ") + what + " " +
                                            std::to_string(i) + " lies outside the region");
        }
    };
    check(sbs, "SBS");
    check(ue, "UE");
}

double lens_area(double r, double r_th) {
    if (!(r_th > 0.0)) throw std::invalid_argument("lens_area: r_th must be positive");
    if (!(r >= 0.0)) throw std::invalid_argument("lens_area: separation must be non-negative");
    if (r >= 2.0 * r_th) return 0.0;
    return 2.0 * r_th * r_th * std::acos(r / (2.0 * r_th)) -
           0.5 * r * std::sqrt(4.0 * r_th * r_th - r * r);
}

double exclusion_area(double r, double r_th) {
    if (!(r_th > 0.0)) throw std::invalid_argument("exclusion_area: r_th must be positive");
    if (!(r >= 0.0 && r <= r_th * (1.0 + kBoundaryEps)))
        throw std::invalid_argument("exclusion_area: r must lie in [0, r_th]");
    return kPi * r_th * r_th - lens_area(r, r_th);
}

double triple_overlap_area(double r1, double r2, double phi, double r_th) {
    return two_ue_areas(r1, r2, phi, r_th).a_t;
}

TwoUeAreas two_ue_areas(double r1, double r2, double phi, double r_th) {
    if (!(r_th > 0.0)) throw std::invalid_argument("two_ue_areas: r_th must be positive");
    const double slack = kBoundaryEps * r_th;
    if (!(r1 >= -slack && r1 <= r_th + slack) || !(r2 >= -slack && r2 <= r_th + slack))
        throw std::invalid_argument("two_ue_areas: UE distances must lie in [0, r_th]");
    if (!(phi >= -kBoundaryEps && phi <= kPi + kBoundaryEps))
        throw std::invalid_argument("two_ue_areas: phi must lie in [0, pi]");
    r1 = std::clamp(r1, 0.0, r_th);
    r2 = std::clamp(r2, 0.0, r_th);
    phi = std::clamp(phi, 0.0, kPi);

    const double R = r_th;
    const double tiny = kBoundaryEps * R;
    const Point c0{0.0, 0.0};
    const Point c1{r1, 0.0};
    const Point c2{r2 * std::cos(phi), r2 * std::sin(phi)};
    const double d12 = dist(c1, c2);

    const double disk = kPi * R * R;
    const double a_o1 = lens_area(r1, R);
    const double a_o2 = lens_area(r2, R);
    const double a12 = lens_area(d12, R);

    // The origin lies in all three disks (r1, r2 <= R), so the triple overlap
    // is never empty. It is either a lens of one circle pair contained in the
    // remaining disk (cases II and III) or a three-arc circular triangle
    // (case I).
    OverlapCase case_id = OverlapCase::I;
    double a_t = 0.0;
    int dropped = -1; // constituent removed in case III: 1 = T10, 2 = T01
    bool classified = false;

    if (d12 <= tiny) {
        // Both UE disks coincide.
        if (r1 <= tiny) {
            case_id = OverlapCase::II; // all three disks coincide
            a_t = disk;
        } else {
            case_id = OverlapCase::III;
            a_t = a_o1;
            dropped = 1;
        }
        classified = true;
    }

    PointPair p12{};
    if (!classified) {
        p12 = circle_pair_points(c1, c2, d12, R);
        if (inside(p12.a, c0, R) && inside(p12.b, c0, R)) {
            case_id = OverlapCase::II; // UE overlap wholly inside the serving disk
            a_t = a12;
            classified = true;
        }
    }
    if (!classified) {
        if (r1 <= tiny) {
            // UE1 sits on the SBS; its disk is the serving disk.
            case_id = OverlapCase::III;
            a_t = a_o2;
            dropped = 2;
            classified = true;
        } else {
            const PointPair p01 = circle_pair_points(c0, c1, r1, R);
            if (inside(p01.a, c2, R) && inside(p01.b, c2, R)) {
                case_id = OverlapCase::III;
                a_t = a_o1;
                dropped = 1;
                classified = true;
            }
        }
    }
    if (!classified) {
        if (r2 <= tiny) {
            case_id = OverlapCase::III;
            a_t = a_o1;
            dropped = 1;
            classified = true;
        } else {
            const PointPair p02 = circle_pair_points(c0, c2, r2, R);
            if (inside(p02.a, c1, R) && inside(p02.b, c1, R)) {
                case_id = OverlapCase::III;
                a_t = a_o2;
                dropped = 2;
                classified = true;
            }
        }
    }
    if (!classified) {
        // Circular triangle: one vertex per circle pair (the intersection
        // point lying inside the third disk), three minor arc segments.
        case_id = OverlapCase::I;
        const PointPair p01 = circle_pair_points(c0, c1, r1, R);
        const PointPair p02 = circle_pair_points(c0, c2, r2, R);
        const Point& v01 = pick_closer(p01, c2);
        const Point& v02 = pick_closer(p02, c1);
        const Point& v12 = pick_closer(p12, c0);
        a_t = triangle_area(v01, v02, v12) + segment_area(dist(v01, v02), R) +
              segment_area(dist(v01, v12), R) + segment_area(dist(v02, v12), R);
    }

    TwoUeAreas out;
    out.case_id = case_id;
    out.a_t = a_t;
    out.a_o1 = a_o1;
    out.a_o2 = a_o2;
    out.a_ec = std::max(0.0, a12 - a_t);
    out.a_e1 = std::max(0.0, disk - a_o1 - a12 + a_t);
    out.a_e2 = std::max(0.0, disk - a_o2 - a12 + a_t);

    const double t11 = a_t;
    const double t10 = std::max(0.0, a_o1 - a_t);
    const double t01 = std::max(0.0, a_o2 - a_t);
    const double t00 = std::max(0.0, disk - a_o1 - a_o2 + a_t);
    if (case_id == OverlapCase::III) {
        if (dropped == 1)
            out.constituent = {t11, t01, t00};
        else
            out.constituent = {t11, t10, t00};
    } else {
        out.constituent = {t11, t10, t01, t00};
    }
    return out;
}

std::vector<Point> sample_hppp(double density, double region_radius, RandomStream& rng) {
    if (!(density >= 0.0)) throw std::invalid_argument("sample_hppp: density must be non-negative");
    if (!(region_radius > 0.0))
        throw std::invalid_argument("sample_hppp: region_radius must be positive");
    const long n = rng.poisson(density * kPi * region_radius * region_radius);
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        const double r = region_radius * std::sqrt(rng.uniform01());
        const double th = 2.0 * kPi * rng.uniform01();
        pts.push_back({r * std::cos(th), r * std::sin(th)});
    }
    return pts;
}

} // namespace scn
