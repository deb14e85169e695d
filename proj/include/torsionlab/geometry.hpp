#ifndef TORSIONLAB_GEOMETRY_HPP
#define TORSIONLAB_GEOMETRY_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "torsionlab/errors.hpp"

namespace torsionlab {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline double dist(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

// Simple closed polygon, vertices in counter-clockwise order.
struct Polygon {
    std::vector<Vec2> vertices;

    std::size_t size() const { return vertices.size(); }
    const Vec2& operator[](std::size_t i) const { return vertices[i]; }
};

struct SectorSpec {
    double theta;  // half-aperture, in (0, pi)
    double r;      // truncation radius, > 0
};

enum class SectorClosure { Arc, Chord };

// Cusp profile F on [0, eta]: either a power law F(t) = t^p with p > 1, or
// tabulated monotone samples.  The cusp wall is |x'| = epsilon * F(x_n).
struct CuspProfile {
    double epsilon = 0.0;
    double eta = 0.0;
    double power = 0.0;                 // > 1 when the power family is used
    std::vector<double> sample_t;       // tabulated family (optional)
    std::vector<double> sample_f;

    bool is_power() const { return sample_t.empty(); }
    double eval(double t) const;
    static CuspProfile power_cusp(double p, double epsilon, double eta);
    static CuspProfile tabulated(std::vector<double> t, std::vector<double> f, double epsilon);
};

struct ConvexDescriptors {
    double inradius;
    double circumradius;
    double eccentricity;
    Vec2 incenter;     // Chebyshev center
    Vec2 circumcenter; // min enclosing ball center
};

// ---------------------------------------------------------------------------
// Polygon primitives
// ---------------------------------------------------------------------------

double polygon_signed_area(const Polygon& poly);
double polygon_area(const Polygon& poly);
double polygon_perimeter(const Polygon& poly);
double polygon_diameter(const Polygon& poly);
bool polygon_is_convex(const Polygon& poly, double tol = 1e-12);
bool polygon_is_simple(const Polygon& poly);
void validate_polygon(const Polygon& poly);
bool point_in_polygon(const Polygon& poly, const Vec2& x);

// Euclidean distance from x to the boundary polyline (inside or outside).
double polygon_distance(const Polygon& poly, const Vec2& x);

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

// Interior half-angle at vertex i (half the angle between the two incident
// edges), in (0, pi).
double polygon_half_angle(const Polygon& poly, std::size_t i);

// Indices of "true" corners: vertices whose interior angle deviates from pi
// by more than angle_tol (filters out sampled-curve vertices).
std::vector<std::size_t> polygon_corner_indices(const Polygon& poly, double angle_tol = 0.17);

// ---------------------------------------------------------------------------
// Domain constructors
// ---------------------------------------------------------------------------

// Regular N-gon with apothem = inradius; rotated so an edge midpoint lies on
// the positive x-axis.
Polygon make_regular_polygon(int n, double inradius);

// Axis-aligned rectangle (x0,x1) x (y0,y1).
Polygon make_rectangle(double x0, double x1, double y0, double y1);

// Truncated planar sector of half-aperture theta and radius r, symmetric
// about the positive x-axis, apex at the origin.  Arc closure approximates
// the arc with arc_segments chords; chord closure joins the two arc
// endpoints directly (requires theta < pi/2).
Polygon make_sector_polygon(double theta, double r, SectorClosure closure,
                            int arc_segments = 64);

// Curvilinear triangle {0 < x < 1, 0 < y < eps * x^(1/(2 beta - 1))} with the
// top curve sampled at m points; optional truncation of the spout at x = x_cut.
Polygon make_curvilinear_triangle(double beta, double epsilon, int m,
                                  double x_cut = 0.0);

// Cusp domain: cuspidal set {0 < x_n <= eta, |x'| < eps F(x_n)} glued to a
// rounded cap above x_n = eta; cusp tip at the origin, axis along +y.
// wall_samples controls the wall resolution; optional spout truncation at
// x_n = t_cut.
Polygon make_cusp_domain(const CuspProfile& profile, int wall_samples = 128,
                         double t_cut = 0.0);

// ---------------------------------------------------------------------------
// Convex geometry
// ---------------------------------------------------------------------------

ConvexDescriptors convex_descriptors(const Polygon& poly);

// Largest R such that every side admits an inscribed ball of radius R
// tangent to it (bisection; tolerance 1e-9 * diameter).
double max_admissible_radius(const Polygon& poly);

// Inner parallel body of a convex polygon at offset r (intersection of
// inward-shifted half-planes).  Empty when r exceeds the inradius.
std::optional<Polygon> convex_inner_offset(const Polygon& poly, double r);

// |{x in poly : dist(x, boundary) < r}| for convex polygons (exact offsets)
// or by grid counting with 2x2 supersampling otherwise.
double collar_area(const Polygon& poly, double r, int grid = 2048);

// Clip a convex polygon by the half-plane {x : n.x <= c}.
Polygon clip_convex(const Polygon& poly, const Vec2& n, double c);

// ---------------------------------------------------------------------------
// Domain JSON (see README for the schema)
// ---------------------------------------------------------------------------

struct DomainSpec {
    Polygon polygon;
    std::string kind;                          // polygon | regular | sector | cusp | curvilinear
    std::function<double(const Vec2&)> size_field;  // optional mesh size hint
    double spout_cut = 0.0;                    // truncation coordinate (cusp/curvilinear)
};

DomainSpec domain_from_json_text(const std::string& text);
DomainSpec domain_from_json_file(const std::string& path);
std::string domain_to_json_text(const Polygon& poly);

} // namespace torsionlab

#endif
