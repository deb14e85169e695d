#include "torsionlab/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace torsionlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Orientation of c relative to segment a->b.
double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b - a).cross(c - a);
}

bool segments_properly_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const double d1 = orient(c, d, a);
    const double d2 = orient(c, d, b);
    const double d3 = orient(a, b, c);
    const double d4 = orient(a, b, d);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
           ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

} // namespace

// ---------------------------------------------------------------------------
// Polygon primitives
// ---------------------------------------------------------------------------

double polygon_signed_area(const Polygon& poly) {
    // Shoelace about the first vertex; centering avoids cancellation for
    // small polygons far from the origin.
    const auto& v = poly.vertices;
    if (v.empty()) return 0.0;
    const Vec2 o = v[0];
    double s = 0.0;
    for (std::size_t i = 1, n = v.size(); i + 1 < n; ++i)
        s += (v[i] - o).cross(v[i + 1] - o);
    return 0.5 * s;
}

double polygon_area(const Polygon& poly) { return std::fabs(polygon_signed_area(poly)); }

double polygon_perimeter(const Polygon& poly) {
    const auto& v = poly.vertices;
    double s = 0.0;
    for (std::size_t i = 0, n = v.size(); i < n; ++i) s += dist(v[i], v[(i + 1) % n]);
    return s;
}

double polygon_diameter(const Polygon& poly) {
    const auto& v = poly.vertices;
    double d2 = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            d2 = std::max(d2, (v[i] - v[j]).norm2());
    return std::sqrt(d2);
}

bool polygon_is_convex(const Polygon& poly, double tol) {
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    if (n < 3) return false;
    const double scale = polygon_diameter(poly);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = v[i];
        const Vec2& b = v[(i + 1) % n];
        const Vec2& c = v[(i + 2) % n];
        if (orient(a, b, c) < -tol * scale * scale) return false;
    }
    return true;
}

bool polygon_is_simple(const Polygon& poly) {
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // Skip adjacent segments (they share an endpoint).
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_properly_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
                return false;
        }
    }
    return true;
}

void validate_polygon(const Polygon& poly) {
    const auto& v = poly.vertices;
    if (v.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
    const double scale = polygon_diameter(poly);
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        if (dist(v[i], v[(i + 1) % n]) <= 1e-14 * scale)
            throw std::invalid_argument("polygon has coincident consecutive vertices");
    }
    if (polygon_signed_area(poly) <= 0.0)
        throw std::invalid_argument("polygon must be counter-clockwise with positive area");
    if (!polygon_is_simple(poly))
        throw std::invalid_argument("polygon edges cross");
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.norm2();
    if (len2 == 0.0) return dist(p, a);
    double t = (p - a).dot(ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return dist(p, a + ab * t);
}

double polygon_distance(const Polygon& poly, const Vec2& x) {
    const auto& v = poly.vertices;
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0, n = v.size(); i < n; ++i)
        d = std::min(d, point_segment_distance(x, v[i], v[(i + 1) % n]));
    return d;
}

bool point_in_polygon(const Polygon& poly, const Vec2& x) {
    // Crossing number; boundary points count as inside.
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = v[i];
        const Vec2& b = v[j];
        if ((a.y > x.y) != (b.y > x.y)) {
            const double t = (x.y - a.y) / (b.y - a.y);
            const double xc = a.x + t * (b.x - a.x);
            if (x.x < xc) inside = !inside;
        }
    }
    return inside;
}

double polygon_half_angle(const Polygon& poly, std::size_t i) {
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    const Vec2& prev = v[(i + n - 1) % n];
    const Vec2& cur = v[i];
    const Vec2& next = v[(i + 1) % n];
    const Vec2 e1 = prev - cur;
    const Vec2 e2 = next - cur;
    // Interior angle of a CCW polygon: sweep from the outgoing edge to the
    // incoming edge, counter-clockwise.
    double ang = std::atan2(e2.cross(e1), e2.dot(e1));
    if (ang < 0) ang += 2.0 * kPi;
    return 0.5 * ang;
}

std::vector<std::size_t> polygon_corner_indices(const Polygon& poly, double angle_tol) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const double full = 2.0 * polygon_half_angle(poly, i);
        if (std::fabs(full - kPi) > angle_tol) out.push_back(i);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

Polygon make_regular_polygon(int n, double inradius) {
    if (n < 3) throw std::invalid_argument("regular polygon needs n >= 3");
    if (!(inradius > 0)) throw std::invalid_argument("inradius must be positive");
    const double R = inradius / std::cos(kPi / n);
    Polygon poly;
    poly.vertices.reserve(static_cast<std::size_t>(n));
    // Vertices at angles pi/n + 2 pi k / n puts an edge midpoint on the +x axis.
    for (int k = 0; k < n; ++k) {
        const double a = kPi / n + 2.0 * kPi * k / n;
        poly.vertices.push_back({R * std::cos(a), R * std::sin(a)});
    }
    return poly;
}

Polygon make_rectangle(double x0, double x1, double y0, double y1) {
    if (!(x1 > x0 && y1 > y0)) throw std::invalid_argument("degenerate rectangle");
    Polygon poly;
    poly.vertices = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
    return poly;
}

Polygon make_sector_polygon(double theta, double r, SectorClosure closure, int arc_segments) {
    if (!(theta > 0 && theta < kPi)) throw std::invalid_argument("sector: theta in (0, pi) required");
    if (!(r > 0)) throw std::invalid_argument("sector: r > 0 required");
    Polygon poly;
    if (closure == SectorClosure::Chord) {
        if (theta >= kPi / 2)
            throw std::invalid_argument("sector: chord closure requires theta < pi/2");
        poly.vertices = {{0, 0},
                         {r * std::cos(theta), -r * std::sin(theta)},
                         {r * std::cos(theta), r * std::sin(theta)}};
        return poly;
    }
    if (arc_segments < 2) throw std::invalid_argument("sector: arc_segments >= 2 required");
    poly.vertices.push_back({0, 0});
    for (int k = 0; k <= arc_segments; ++k) {
        const double a = -theta + 2.0 * theta * k / arc_segments;
        poly.vertices.push_back({r * std::cos(a), r * std::sin(a)});
    }
    return poly;
}

Polygon make_curvilinear_triangle(double beta, double epsilon, int m, double x_cut) {
    if (!(beta > 0.5 && beta < 1.0))
        throw std::invalid_argument("curvilinear triangle: beta in (1/2, 1) required");
    if (!(epsilon > 0)) throw std::invalid_argument("curvilinear triangle: epsilon > 0 required");
    if (m < 16) throw std::invalid_argument("curvilinear triangle: m >= 16 required");
    if (!(x_cut >= 0 && x_cut < 0.5))
        throw std::invalid_argument("curvilinear triangle: x_cut in [0, 0.5) required");

    const double k = 1.0 / (2.0 * beta - 1.0);
    const double x_lo = std::max(x_cut, 1e-7);
    Polygon poly;
    poly.vertices.reserve(static_cast<std::size_t>(m) + 2);
    poly.vertices.push_back({x_cut, 0.0});
    poly.vertices.push_back({1.0, 0.0});
    // Top curve, sampled log-uniformly from x = 1 down to x_lo (m points).
    // For the untruncated domain the closing edge runs from the lowest curve
    // sample to the tip (x_cut = 0).
    const double ratio = std::log(x_lo);
    for (int j = 0; j < m; ++j) {
        const double x = (x_cut > 0 && j == m - 1) ? x_cut
                                                   : std::exp(ratio * j / (m - 1));
        poly.vertices.push_back({x, epsilon * std::pow(x, k)});
    }
    return poly;
}

// ---------------------------------------------------------------------------
// Cusp profiles and cusp domains
// ---------------------------------------------------------------------------

double CuspProfile::eval(double t) const {
    if (is_power()) return std::pow(t, power);
    // Linear interpolation of the tabulated samples.
    if (t <= sample_t.front()) return sample_f.front();
    if (t >= sample_t.back()) return sample_f.back();
    auto it = std::upper_bound(sample_t.begin(), sample_t.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - sample_t.begin());
    const double w = (t - sample_t[i - 1]) / (sample_t[i] - sample_t[i - 1]);
    return sample_f[i - 1] + w * (sample_f[i] - sample_f[i - 1]);
}

CuspProfile CuspProfile::power_cusp(double p, double epsilon, double eta) {
    if (!(p > 1.0))
        throw std::invalid_argument("cusp: power p > 1 required (F'(0) = 0)");
    if (!(epsilon > 0 && eta > 0)) throw std::invalid_argument("cusp: epsilon, eta > 0 required");
    CuspProfile prof;
    prof.power = p;
    prof.epsilon = epsilon;
    prof.eta = eta;
    return prof;
}

CuspProfile CuspProfile::tabulated(std::vector<double> t, std::vector<double> f, double epsilon) {
    if (t.size() != f.size() || t.size() < 2)
        throw std::invalid_argument("cusp: tabulated profile needs matching samples");
    if (std::fabs(f.front()) > 0.0) throw std::invalid_argument("cusp: F(0) = 0 required");
    if (t.front() != 0.0) throw std::invalid_argument("cusp: samples must start at t = 0");
    for (std::size_t i = 1; i < f.size(); ++i) {
        if (f[i] < f[i - 1] - 1e-15 || t[i] <= t[i - 1])
            throw std::invalid_argument("cusp: F must be non-decreasing on an increasing grid");
        if (f[i] <= 0.0) throw std::invalid_argument("cusp: F > 0 on (0, eta] required");
    }
    if (!(epsilon > 0)) throw std::invalid_argument("cusp: epsilon > 0 required");
    CuspProfile prof;
    prof.epsilon = epsilon;
    prof.eta = t.back();
    prof.sample_t = std::move(t);
    prof.sample_f = std::move(f);
    return prof;
}

Polygon make_cusp_domain(const CuspProfile& profile, int wall_samples, double t_cut) {
    if (!(profile.epsilon > 0 && profile.eta > 0))
        throw std::invalid_argument("cusp: invalid profile");
    if (profile.is_power() && !(profile.power > 1.0))
        throw std::invalid_argument("cusp: power p > 1 required");
    if (!profile.is_power() && std::fabs(profile.eval(0.0)) > 0.0)
        throw std::invalid_argument("cusp: F(0) = 0 required");
    if (wall_samples < 8) throw std::invalid_argument("cusp: wall_samples >= 8 required");
    if (!(t_cut >= 0 && t_cut < 0.5 * profile.eta))
        throw std::invalid_argument("cusp: t_cut in [0, eta/2) required");

    const double eps = profile.epsilon;
    const double eta = profile.eta;
    const double w_top = eps * profile.eval(eta);

    // Wall heights, log-uniform from eta down to the cut (or a small floor).
    const double t_lo = std::max(t_cut, 1e-7 * eta);
    std::vector<double> heights(static_cast<std::size_t>(wall_samples));
    const double lr = std::log(t_lo / eta);
    for (int j = 0; j < wall_samples; ++j)
        heights[static_cast<std::size_t>(j)] = eta * std::exp(lr * j / (wall_samples - 1));
    if (t_cut > 0) heights.back() = t_cut;

    Polygon poly;
    // Right wall ascending, cap arc, left wall descending; tip (or cut edge) closes.
    if (t_cut == 0.0) {
        poly.vertices.push_back({0.0, 0.0});
    } else {
        const double wc = eps * profile.eval(t_cut);
        poly.vertices.push_back({-wc, t_cut});
        poly.vertices.push_back({wc, t_cut});
    }
    for (auto it = heights.rbegin(); it != heights.rend(); ++it) {
        if (t_cut > 0 && it == heights.rbegin()) continue;  // cut edge already emitted
        poly.vertices.push_back({eps * profile.eval(*it), *it});
    }
    // Semicircular cap of radius eps*F(eta) centred at (0, eta).
    const int cap_segments = 48;
    for (int k = 1; k < cap_segments; ++k) {
        const double a = kPi * k / cap_segments;
        poly.vertices.push_back({w_top * std::cos(a), eta + w_top * std::sin(a)});
    }
    for (double h : heights) {
        if (t_cut > 0 && h == heights.back()) continue;
        poly.vertices.push_back({-eps * profile.eval(h), h});
    }
    if (t_cut == 0.0) {
        // Left wall ends at the tip, which is already the first vertex.
        poly.vertices.pop_back();  // drop near-tip duplicate from the floor sample
    }
    return poly;
}

// ---------------------------------------------------------------------------
// Convex geometry
// ---------------------------------------------------------------------------

Polygon clip_convex(const Polygon& poly, const Vec2& n, double c) {
    // Sutherland-Hodgman against the half-plane {x : n.x <= c}.
    Polygon out;
    const auto& v = poly.vertices;
    const std::size_t m = v.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2& a = v[i];
        const Vec2& b = v[(i + 1) % m];
        const double fa = n.dot(a) - c;
        const double fb = n.dot(b) - c;
        if (fa <= 0) out.vertices.push_back(a);
        if ((fa < 0 && fb > 0) || (fa > 0 && fb < 0)) {
            const double t = fa / (fa - fb);
            out.vertices.push_back(a + (b - a) * t);
        }
    }
    return out;
}

std::optional<Polygon> convex_inner_offset(const Polygon& poly, double r) {
    Polygon p = poly;
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n && p.vertices.size() >= 3; ++i) {
        const Vec2 e = v[(i + 1) % n] - v[i];
        const Vec2 nin{-e.y, e.x};  // inward normal for CCW
        const double len = nin.norm();
        const Vec2 nh = nin / len;
        // Keep {x : nh.x >= nh.a + r}  <=>  {x : (-nh).x <= -(nh.a + r)}.
        p = clip_convex(p, {-nh.x, -nh.y}, -(nh.dot(v[i]) + r));
    }
    if (p.vertices.size() < 3 || polygon_area(p) <= 0.0) return std::nullopt;
    return p;
}

namespace {

// Min enclosing circle (Welzl, deterministic input order).
struct Circle {
    Vec2 c;
    double r2;
    bool contains(const Vec2& p) const { return (p - c).norm2() <= r2 * (1 + 1e-12) + 1e-300; }
};

Circle circle_from(const Vec2& a, const Vec2& b) {
    const Vec2 c = (a + b) * 0.5;
    return {c, (a - c).norm2()};
}

Circle circle_from(const Vec2& a, const Vec2& b, const Vec2& c) {
    const double d = 2.0 * ((b - a).cross(c - a));
    if (std::fabs(d) < 1e-300) {
        // Collinear: take the widest pair.
        Circle best = circle_from(a, b);
        for (const Circle& cand : {circle_from(a, c), circle_from(b, c)})
            if (cand.r2 > best.r2) best = cand;
        return best;
    }
    const double a2 = a.norm2(), b2 = b.norm2(), c2 = c.norm2();
    const Vec2 ctr{(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
                   (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
    return {ctr, (a - ctr).norm2()};
}

Circle min_enclosing_circle(const std::vector<Vec2>& pts) {
    Circle c{{0, 0}, 0};
    if (pts.empty()) return c;
    c = {pts[0], 0.0};
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (c.contains(pts[i])) continue;
        c = {pts[i], 0.0};
        for (std::size_t j = 0; j < i; ++j) {
            if (c.contains(pts[j])) continue;
            c = circle_from(pts[i], pts[j]);
            for (std::size_t k = 0; k < j; ++k) {
                if (c.contains(pts[k])) continue;
                c = circle_from(pts[i], pts[j], pts[k]);
            }
        }
    }
    return c;
}

double side_distance(const Polygon& poly, std::size_t i, const Vec2& x) {
    const auto& v = poly.vertices;
    const Vec2 a = v[i];
    const Vec2 e = v[(i + 1) % v.size()] - a;
    const Vec2 nh = Vec2{-e.y, e.x} / e.norm();
    return nh.dot(x - a);
}

} // namespace

ConvexDescriptors convex_descriptors(const Polygon& poly) {
    validate_polygon(poly);
    if (!polygon_is_convex(poly)) throw NotConvexError("convex_descriptors: polygon is not convex");

    const double diam = polygon_diameter(poly);

    // Inradius by bisection on the inner offset (Chebyshev radius).
    double lo = 0.0, hi = 0.5 * diam;
    Vec2 center{};
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        auto off = convex_inner_offset(poly, mid);
        if (off) {
            lo = mid;
            Vec2 c{0, 0};
            for (const Vec2& p : off->vertices) c += p;
            center = c / static_cast<double>(off->vertices.size());
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-14 * diam) break;
    }

    const Circle mec = min_enclosing_circle(poly.vertices);
    ConvexDescriptors d;
    d.inradius = lo;
    d.incenter = center;
    d.circumradius = std::sqrt(mec.r2);
    d.circumcenter = mec.c;
    d.eccentricity = d.circumradius / d.inradius;
    return d;
}

double max_admissible_radius(const Polygon& poly) {
    validate_polygon(poly);
    if (!polygon_is_convex(poly)) throw NotConvexError("max_admissible_radius: polygon is not convex");

    const double diam = polygon_diameter(poly);
    const std::size_t n = poly.size();

    // R is admissible iff the eroded body is nonempty and still touches the
    // offset line of every side.
    auto admissible = [&](double R) {
        auto off = convex_inner_offset(poly, R);
        if (!off) return false;
        for (std::size_t i = 0; i < n; ++i) {
            double dmin = std::numeric_limits<double>::infinity();
            for (const Vec2& p : off->vertices) dmin = std::min(dmin, side_distance(poly, i, p));
            if (dmin > R + 1e-9 * diam) return false;
        }
        return true;
    };

    double lo = 0.0, hi = 0.5 * diam;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (admissible(mid))
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-9 * diam) break;
    }
    return lo;
}

double collar_area(const Polygon& poly, double r, int grid) {
    if (r <= 0) return 0.0;
    const double area = polygon_area(poly);
    if (polygon_is_convex(poly)) {
        auto off = convex_inner_offset(poly, r);
        return off ? area - polygon_area(*off) : area;
    }
    // Grid counting with 2x2 supersampling.
    double xmin = poly[0].x, xmax = xmin, ymin = poly[0].y, ymax = ymin;
    for (const Vec2& p : poly.vertices) {
        xmin = std::min(xmin, p.x); xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y); ymax = std::max(ymax, p.y);
    }
    const double hx = (xmax - xmin) / grid;
    const double hy = (ymax - ymin) / grid;
    long hits = 0;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            for (int si = 0; si < 2; ++si) {
                for (int sj = 0; sj < 2; ++sj) {
                    const Vec2 p{xmin + (i + 0.25 + 0.5 * si) * hx,
                                 ymin + (j + 0.25 + 0.5 * sj) * hy};
                    if (point_in_polygon(poly, p) && polygon_distance(poly, p) < r) ++hits;
                }
            }
        }
    }
    return hits * hx * hy / 4.0;
}

// ---------------------------------------------------------------------------
// Domain JSON
// ---------------------------------------------------------------------------

namespace {

std::function<double(const Vec2&)> curvilinear_size_field(double beta, double eps, double cut) {
    const double k = 1.0 / (2.0 * beta - 1.0);
    const double frac = 0.30;
    const double floor_w = frac * eps * std::pow(std::max(cut, 1e-7), k);
    return [=](const Vec2& p) {
        const double x = std::max(p.x, cut);
        return std::max(floor_w, frac * eps * std::pow(std::max(x, 1e-7), k));
    };
}

std::function<double(const Vec2&)> cusp_size_field(const CuspProfile& prof, double cut) {
    const double frac = 0.30;
    const CuspProfile p = prof;
    const double floor_w = frac * 2.0 * p.epsilon * p.eval(std::max(cut, 1e-6 * p.eta));
    return [=](const Vec2& q) {
        if (q.y >= p.eta) return frac * 2.0 * p.epsilon * p.eval(p.eta);
        const double t = std::max(q.y, std::max(cut, 1e-6 * p.eta));
        return std::max(floor_w, frac * 2.0 * p.epsilon * p.eval(t));
    };
}

} // namespace

DomainSpec domain_from_json_text(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const std::string type = j.at("type").get<std::string>();
    DomainSpec spec;
    spec.kind = type;
    if (type == "polygon") {
        for (const auto& v : j.at("vertices"))
            spec.polygon.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
        validate_polygon(spec.polygon);
    } else if (type == "regular") {
        spec.polygon = make_regular_polygon(j.at("n").get<int>(), j.at("inradius").get<double>());
    } else if (type == "sector") {
        const std::string cl = j.value("closure", std::string("arc"));
        const int seg = j.value("segments", 64);
        spec.polygon = make_sector_polygon(j.at("theta").get<double>(), j.at("r").get<double>(),
                                           cl == "chord" ? SectorClosure::Chord : SectorClosure::Arc,
                                           seg);
    } else if (type == "cusp") {
        const double p = j.at("p").get<double>();
        const double eps = j.at("epsilon").get<double>();
        const double eta = j.at("eta").get<double>();
        const double cut = j.value("cut", 0.0);
        const int samples = j.value("samples", 128);
        auto prof = CuspProfile::power_cusp(p, eps, eta);
        spec.polygon = make_cusp_domain(prof, samples, cut);
        spec.size_field = cusp_size_field(prof, cut);
        spec.spout_cut = cut;
    } else if (type == "curvilinear") {
        const double b = j.at("beta").get<double>();
        const double eps = j.at("epsilon").get<double>();
        const int m = j.at("m").get<int>();
        const double cut = j.value("cut", 0.0);
        spec.polygon = make_curvilinear_triangle(b, eps, m, cut);
        spec.size_field = curvilinear_size_field(b, eps, cut);
        spec.spout_cut = cut;
    } else {
        throw std::invalid_argument("unknown domain type: " + type);
    }
    return spec;
}

DomainSpec domain_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open domain file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return domain_from_json_text(ss.str());
}

std::string domain_to_json_text(const Polygon& poly) {
    nlohmann::json j;
    j["type"] = "polygon";
    auto& verts = j["vertices"];
    for (const Vec2& v : poly.vertices) verts.push_back({v.x, v.y});
    return j.dump();
}

} // namespace torsionlab
