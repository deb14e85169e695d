#include "torsionlab/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

#include "torsionlab/errors.hpp"

namespace torsionlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Classical 7-point degree-5 rule on the reference triangle.
struct TriRulePoint {
    double l0, l1, l2, w;
};

const std::array<TriRulePoint, 7>& seven_point_rule() {
    static const double s15 = std::sqrt(15.0);
    static const double a1 = (6.0 + s15) / 21.0, w1 = (155.0 + s15) / 1200.0;
    static const double a2 = (6.0 - s15) / 21.0, w2 = (155.0 - s15) / 1200.0;
    static const std::array<TriRulePoint, 7> rule = {{
        {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 9.0 / 40.0},
        {a1, a1, 1 - 2 * a1, w1},
        {a1, 1 - 2 * a1, a1, w1},
        {1 - 2 * a1, a1, a1, w1},
        {a2, a2, 1 - 2 * a2, w2},
        {a2, 1 - 2 * a2, a2, w2},
        {1 - 2 * a2, a2, a2, w2},
    }};
    return rule;
}

// 16-point Gauss-Legendre nodes/weights on (0, 1).
struct GL16 {
    std::array<double, 16> x, w;
};

const GL16& gl16() {
    static const GL16 g = [] {
        // Nodes/weights on (-1, 1), mapped to (0, 1).
        const double xs[8] = {0.09501250983763744, 0.28160355077925891, 0.45801677765722739,
                              0.61787624440264375, 0.75540440835500303, 0.86563120238783174,
                              0.94457502307323258, 0.98940093499164993};
        const double ws[8] = {0.18945061045506850, 0.18260341504492359, 0.16915651939500254,
                              0.14959598881657673, 0.12462897125553387, 0.09515851168249278,
                              0.06225352393864789, 0.02715245941175409};
        GL16 out;
        for (int i = 0; i < 8; ++i) {
            out.x[static_cast<std::size_t>(8 + i)] = 0.5 * (1.0 + xs[i]);
            out.x[static_cast<std::size_t>(7 - i)] = 0.5 * (1.0 - xs[i]);
            out.w[static_cast<std::size_t>(8 + i)] = 0.5 * ws[i];
            out.w[static_cast<std::size_t>(7 - i)] = 0.5 * ws[i];
        }
        return out;
    }();
    return g;
}

// Integral of u^{-beta} over one triangle carrying the affine function with
// vertex values v[0..2] (already zero-thresholded), with |T| = area.
// Duffy route: collapse onto a zero vertex; the radial factor integrates
// exactly, the transverse direction uses GL16 (or is exact when the opposite
// edge also carries a zero).
double triangle_beta_quadrature(const std::array<double, 3>& v, double area, double beta,
                                double* skipped_area) {
    int zeros = 0;
    for (double x : v)
        if (x == 0.0) ++zeros;

    if (zeros == 0) {
        double s = 0.0;
        for (const auto& q : seven_point_rule()) {
            const double u = q.l0 * v[0] + q.l1 * v[1] + q.l2 * v[2];
            s += q.w * std::pow(u, -beta);
        }
        return s * area;
    }
    if (zeros == 3) {
        // Linear interpolant vanishes identically; the true field is positive
        // here, so skip and account the area (the mesher is supposed to
        // prevent this case).
        if (skipped_area) *skipped_area += area;
        return 0.0;
    }
    if (zeros == 2) {
        double u2 = 0.0;
        for (double x : v) u2 = std::max(u2, x);
        return 2.0 * area * std::pow(u2, -beta) / ((1.0 - beta) * (2.0 - beta));
    }
    // One zero vertex: u(s, t) = s ((1-t) u1 + t u2), with
    //   int_T u^{-beta} = 2 A int_0^1 s^{1-beta} ds int_0^1 w(t)^{-beta} dt.
    double u1 = -1.0, u2 = -1.0;
    for (double x : v) {
        if (x == 0.0) continue;
        if (u1 < 0)
            u1 = x;
        else
            u2 = x;
    }
    double transverse = 0.0;
    const auto& g = gl16();
    for (int i = 0; i < 16; ++i)
        transverse += g.w[static_cast<std::size_t>(i)] *
                      std::pow((1.0 - g.x[static_cast<std::size_t>(i)]) * u1 +
                                   g.x[static_cast<std::size_t>(i)] * u2,
                               -beta);
    return 2.0 * area * transverse / (2.0 - beta);
}

struct Tri {
    Vec2 p[3];
    double u[3];
};

double field_value_threshold(const ScalarField& field) {
    return 1e-14 * field.max_value();
}

// One quadrature pass over the (possibly subdivided) triangles.
double beta_pass(const std::vector<Tri>& tris, double beta, double zero_tol,
                 double* skipped_area, std::vector<double>* per_tri) {
    double total = 0.0;
    if (per_tri) per_tri->resize(tris.size());
    for (std::size_t i = 0; i < tris.size(); ++i) {
        const Tri& t = tris[i];
        const double area = 0.5 * (t.p[1] - t.p[0]).cross(t.p[2] - t.p[0]);
        std::array<double, 3> v{t.u[0], t.u[1], t.u[2]};
        for (double& x : v)
            if (x <= zero_tol) x = 0.0;
        const double val = triangle_beta_quadrature(v, area, beta, skipped_area);
        total += val;
        if (per_tri) (*per_tri)[i] = val;
    }
    return total;
}

std::vector<Tri> subdivide(const std::vector<Tri>& tris) {
    std::vector<Tri> out;
    out.reserve(tris.size() * 4);
    for (const Tri& t : tris) {
        const Vec2 m01 = (t.p[0] + t.p[1]) * 0.5;
        const Vec2 m12 = (t.p[1] + t.p[2]) * 0.5;
        const Vec2 m20 = (t.p[2] + t.p[0]) * 0.5;
        const double u01 = 0.5 * (t.u[0] + t.u[1]);
        const double u12 = 0.5 * (t.u[1] + t.u[2]);
        const double u20 = 0.5 * (t.u[2] + t.u[0]);
        out.push_back({{t.p[0], m01, m20}, {t.u[0], u01, u20}});
        out.push_back({{m01, t.p[1], m12}, {u01, t.u[1], u12}});
        out.push_back({{m20, m12, t.p[2]}, {u20, u12, t.u[2]}});
        out.push_back({{m01, m12, m20}, {u01, u12, u20}});
    }
    return out;
}

} // namespace

BetaIntegralResult beta_integral(const ScalarField& field, double beta) {
    return beta_integral_over(field, beta, {});
}

BetaIntegralResult beta_integral_over(const ScalarField& field, double beta,
                                      const std::function<bool(const Vec2&)>& keep) {
    if (!(beta > 0 && beta < 1)) throw std::domain_error("beta_integral: beta in (0, 1) required");
    const TriMesh& mesh = *field.mesh;

    BetaIntegralResult res;
    res.beta = beta;
    res.clamped_nodes = field.clamped_nodes;

    const double zero_tol = field_value_threshold(field);

    std::vector<Tri> tris;
    std::vector<int> tri_corner;
    tris.reserve(mesh.tri_count());

    // Corner positions for the per-corner breakdown.
    const auto corner_ids = polygon_corner_indices(mesh.domain);
    const double tag_radius = 2.0 * std::max(mesh.target_h, 1e-12);

    for (std::size_t t = 0; t < mesh.tri_count(); ++t) {
        const auto& T = mesh.triangles[t];
        Tri tri;
        for (int k = 0; k < 3; ++k) {
            tri.p[k] = mesh.nodes[static_cast<std::size_t>(T[k])];
            tri.u[k] = field.values[static_cast<std::size_t>(T[k])];
        }
        const Vec2 c = (tri.p[0] + tri.p[1] + tri.p[2]) / 3.0;
        if (keep && !keep(c)) continue;
        int tag = -1;
        double best = tag_radius;
        for (std::size_t k = 0; k < corner_ids.size(); ++k) {
            const double d = dist(c, mesh.domain[corner_ids[k]]);
            if (d < best) {
                best = d;
                tag = static_cast<int>(k);
            }
        }
        tri_corner.push_back(tag);
        tris.push_back(tri);
    }

    std::vector<double> per_tri;
    const double v0 = beta_pass(tris, beta, zero_tol, &res.skipped_area, &per_tri);
    const double h0 = mesh.target_h;
    res.refinement_history.push_back({h0, v0});

    auto level1 = subdivide(tris);
    const double v1 = beta_pass(level1, beta, zero_tol, nullptr, nullptr);
    res.refinement_history.push_back({h0 / 2, v1});
    auto level2 = subdivide(level1);
    const double v2 = beta_pass(level2, beta, zero_tol, nullptr, nullptr);
    res.refinement_history.push_back({h0 / 4, v2});

    res.value = v2;
    res.error_estimate = std::fabs(v2 - v1);

    std::map<int, double> by_corner;
    for (std::size_t i = 0; i < tris.size(); ++i) by_corner[tri_corner[i]] += per_tri[i];
    // Rescale the level-0 breakdown onto the refined value.
    const double scale = v0 > 0 ? res.value / v0 : 1.0;
    for (auto& [tag, val] : by_corner) res.corner_contributions.push_back({tag, val * scale});

    if (res.skipped_area > 0 || res.clamped_nodes > 0.01 * static_cast<double>(mesh.node_count()))
        res.tainted = true;
    return res;
}

std::pair<double, double> torsional_rigidity(const ScalarField& field) {
    const TriMesh& mesh = *field.mesh;
    double integral_u = 0.0;
    double energy = 0.0;
    for (std::size_t t = 0; t < mesh.tri_count(); ++t) {
        const auto& T = mesh.triangles[t];
        const Vec2& p0 = mesh.nodes[static_cast<std::size_t>(T[0])];
        const Vec2& p1 = mesh.nodes[static_cast<std::size_t>(T[1])];
        const Vec2& p2 = mesh.nodes[static_cast<std::size_t>(T[2])];
        const double u0 = field.values[static_cast<std::size_t>(T[0])];
        const double u1 = field.values[static_cast<std::size_t>(T[1])];
        const double u2 = field.values[static_cast<std::size_t>(T[2])];
        const double area2 = (p1 - p0).cross(p2 - p0);
        const double area = 0.5 * area2;
        integral_u += area * (u0 + u1 + u2) / 3.0;
        const Vec2 grad = (Vec2{p1.y - p2.y, p2.x - p1.x} * u0 + Vec2{p2.y - p0.y, p0.x - p2.x} * u1 +
                           Vec2{p0.y - p1.y, p1.x - p0.x} * u2) /
                          area2;
        energy += area * grad.norm2();
    }
    return {integral_u, energy};
}

double sublevel_measure(const ScalarField& field, double lambda) {
    if (!(lambda > 0)) throw std::domain_error("sublevel_measure: lambda > 0 required");
    const TriMesh& mesh = *field.mesh;
    double total = 0.0;
    for (std::size_t t = 0; t < mesh.tri_count(); ++t) {
        const auto& T = mesh.triangles[t];
        std::array<double, 3> v{field.values[static_cast<std::size_t>(T[0])],
                                field.values[static_cast<std::size_t>(T[1])],
                                field.values[static_cast<std::size_t>(T[2])]};
        std::sort(v.begin(), v.end());
        const double area = mesh.triangle_area(t);
        if (lambda <= v[0]) continue;
        if (lambda >= v[2]) {
            total += area;
            continue;
        }
        if (lambda <= v[1]) {
            total += area * (lambda - v[0]) * (lambda - v[0]) /
                     ((v[1] - v[0]) * (v[2] - v[0]));
        } else {
            total += area * (1.0 - (v[2] - lambda) * (v[2] - lambda) /
                                       ((v[2] - v[0]) * (v[2] - v[1])));
        }
    }
    return total;
}

double weak_type_exponent(const ScalarField& field, const std::vector<double>& lambda_grid) {
    std::vector<double> lx, ly;
    for (double lam : lambda_grid) {
        const double m = sublevel_measure(field, lam);
        if (m > 0) {
            lx.push_back(std::log(lam));
            ly.push_back(std::log(m));
        }
    }
    if (lx.size() < 3) throw FitFailure("weak_type_exponent: too few usable grid points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx <= 0) throw FitFailure("weak_type_exponent: degenerate lambda grid");
    return sxy / sxx;
}

double mellin_identity_value(const ScalarField& field, double beta, int grid_points) {
    if (!(beta > 0 && beta < 1)) throw std::domain_error("mellin: beta in (0,1) required");
    const double umax = field.max_value();
    if (!(umax > 0)) throw std::domain_error("mellin: field vanishes");
    const double lam_min = 1e-6 * umax;
    const int N = std::max(grid_points, 16);

    // Trapezoid in log(lambda) of beta * lambda^{-beta} |{u < lambda}|.
    std::vector<double> f(static_cast<std::size_t>(N));
    const double dlog = std::log(umax / lam_min) / (N - 1);
    for (int i = 0; i < N; ++i) {
        const double lam = lam_min * std::exp(dlog * i);
        f[static_cast<std::size_t>(i)] =
            beta * std::pow(lam, -beta) * sublevel_measure(field, lam);
    }
    double body = 0.0;
    for (int i = 0; i + 1 < N; ++i)
        body += 0.5 * (f[static_cast<std::size_t>(i)] + f[static_cast<std::size_t>(i) + 1]) * dlog;

    // Head: |{u < lambda}| ~ (m(min)/min) lambda below the grid.
    const double m_min = sublevel_measure(field, lam_min);
    const double head = beta * m_min * std::pow(lam_min, -beta) / (1.0 - beta);
    // Tail: |{u < lambda}| = |Omega| above max u.
    const TriMesh& mesh = *field.mesh;
    const double tail = mesh.total_area() * std::pow(umax, -beta);
    return body + head + tail;
}

// ---------------------------------------------------------------------------
// Distance-function measures
// ---------------------------------------------------------------------------

double triangle_linear_power_integral(double v0, double v1, double v2, double area, double p) {
    // int_T L^{-p} = 2 |T| * second divided difference of G, G(u) = u^{2-p}/((1-p)(2-p)).
    if (!(p < 1.0)) throw std::domain_error("triangle_linear_power_integral: p < 1 required");
    std::array<double, 3> v{v0, v1, v2};
    std::sort(v.begin(), v.end());
    if (v[0] < 0) throw std::domain_error("triangle_linear_power_integral: negative vertex value");
    const double norm = (1.0 - p) * (2.0 - p);
    auto G = [&](double u) { return std::pow(u, 2.0 - p); };
    const double scale = std::max(v[2], 1e-300);
    // Threshold balancing cancellation in the direct divided difference
    // against the O(eps^2) error of the confluent midpoint formulas.
    const double eps = 1e-4 * scale;

    double dd;
    if (v[2] - v[0] < eps) {
        // All values coincide: G''(v)/2 with the normalisation factored out.
        const double u = (v[0] + v[1] + v[2]) / 3.0;
        dd = 0.5 * norm * std::pow(std::max(u, 1e-300), -p);
    } else if (v[1] - v[0] < eps) {
        const double a = 0.5 * (v[0] + v[1]);
        const double c = v[2];
        // Confluent [a, a, c]: (G(c) - G(a) - (c-a) G'(a)) / (c-a)^2.
        const double Gp = (a > 0) ? (2.0 - p) * std::pow(a, 1.0 - p) : 0.0;
        dd = (G(c) - G(a) - (c - a) * Gp) / ((c - a) * (c - a));
    } else if (v[2] - v[1] < eps) {
        const double a = v[0];
        const double c = 0.5 * (v[1] + v[2]);
        const double Gp = (2.0 - p) * std::pow(c, 1.0 - p);
        dd = (G(a) - G(c) + (c - a) * Gp) / ((c - a) * (c - a));
    } else {
        dd = G(v[0]) / ((v[0] - v[1]) * (v[0] - v[2])) +
             G(v[1]) / ((v[1] - v[0]) * (v[1] - v[2])) +
             G(v[2]) / ((v[2] - v[0]) * (v[2] - v[1]));
    }
    return 2.0 * area * dd / norm;
}

namespace {

struct EdgeLine {
    Vec2 n;     // unit inward normal
    double c;   // signed distance: dist(x) = n.x - c
};

std::vector<EdgeLine> edge_lines(const Polygon& poly) {
    std::vector<EdgeLine> lines;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e = poly[(i + 1) % n] - poly[i];
        const Vec2 nh = Vec2{-e.y, e.x} / e.norm();
        lines.push_back({nh, nh.dot(poly[i])});
    }
    return lines;
}

// Nearest-edge cell of edge i inside a convex polygon, optionally clipped to
// {dist_i < t}.
Polygon nearest_edge_cell(const Polygon& poly, const std::vector<EdgeLine>& lines,
                          std::size_t i, double t) {
    Polygon cell = poly;
    for (std::size_t j = 0; j < lines.size() && cell.vertices.size() >= 3; ++j) {
        if (j == i) continue;
        // Keep {dist_i <= dist_j}  <=>  {(n_i - n_j).x <= c_i - c_j}.
        cell = clip_convex(cell, lines[i].n - lines[j].n, lines[i].c - lines[j].c);
    }
    if (t < std::numeric_limits<double>::infinity() && cell.vertices.size() >= 3)
        cell = clip_convex(cell, lines[i].n, lines[i].c + t);
    return cell;
}

double collar_integral_convex(const Polygon& poly, double alpha, double t) {
    const auto lines = edge_lines(poly);
    double total = 0.0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        Polygon cell = nearest_edge_cell(poly, lines, i, t);
        if (cell.vertices.size() < 3) continue;
        // Fan triangulation; the distance function is affine on the cell.
        for (std::size_t k = 1; k + 1 < cell.vertices.size(); ++k) {
            const Vec2& a = cell.vertices[0];
            const Vec2& b = cell.vertices[k];
            const Vec2& c = cell.vertices[k + 1];
            const double area = 0.5 * (b - a).cross(c - a);
            if (area <= 0) continue;
            const double va = std::max(0.0, lines[i].n.dot(a) - lines[i].c);
            const double vb = std::max(0.0, lines[i].n.dot(b) - lines[i].c);
            const double vc = std::max(0.0, lines[i].n.dot(c) - lines[i].c);
            total += triangle_linear_power_integral(va, vb, vc, area, alpha);
        }
    }
    return total;
}

double collar_integral_grid(const Polygon& poly, double alpha, double t, int grid) {
    double xmin = poly[0].x, xmax = xmin, ymin = poly[0].y, ymax = ymin;
    for (const Vec2& p : poly.vertices) {
        xmin = std::min(xmin, p.x); xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y); ymax = std::max(ymax, p.y);
    }
    const double hx = (xmax - xmin) / grid;
    const double hy = (ymax - ymin) / grid;
    double total = 0.0;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            for (int si = 0; si < 2; ++si) {
                for (int sj = 0; sj < 2; ++sj) {
                    const Vec2 p{xmin + (i + 0.25 + 0.5 * si) * hx,
                                 ymin + (j + 0.25 + 0.5 * sj) * hy};
                    if (!point_in_polygon(poly, p)) continue;
                    const double d = polygon_distance(poly, p);
                    if (d >= t || d <= 0) continue;
                    total += std::pow(d, -alpha) * hx * hy / 4.0;
                }
            }
        }
    }
    return total;
}

// Sum of cot(half interior angle) over the corners; with perimeter P this
// gives the small-r collar expansion |{delta < r}| = P r - kappa r^2.
double corner_cot_sum(const Polygon& poly) {
    double s = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i)
        s += 1.0 / std::tan(polygon_half_angle(poly, i));
    return s;
}

} // namespace

DistanceProfile omega_profile(const Polygon& poly, double alpha,
                              const std::vector<double>& radii) {
    if (!(alpha >= 0 && alpha < 1)) throw std::domain_error("omega_profile: alpha in [0,1) required");
    DistanceProfile prof;
    prof.alpha = alpha;
    prof.radii = radii;
    for (double r : radii)
        prof.omega_values.push_back(collar_area(poly, r) / std::pow(r, alpha));
    return prof;
}

double truncated_distance_integral(const Polygon& poly, double alpha, double t) {
    if (!(alpha >= 0 && alpha < 1))
        throw std::domain_error("truncated_distance_integral: alpha in [0,1) required");
    if (alpha == 0.0) return collar_area(poly, t);
    if (polygon_is_convex(poly)) return collar_integral_convex(poly, alpha, t);
    return collar_integral_grid(poly, alpha, t, 2048);
}

double distance_integral(const Polygon& poly, double alpha) {
    if (!(alpha >= 0 && alpha < 1))
        throw std::domain_error("distance_integral: alpha in [0,1) required");
    if (alpha == 0.0) return polygon_area(poly);
    if (polygon_is_convex(poly))
        return collar_integral_convex(poly, alpha, std::numeric_limits<double>::infinity());
    return collar_integral_grid(poly, alpha, std::numeric_limits<double>::infinity(), 2048);
}

CoareaReport coarea_check(const Polygon& poly, double alpha, double t) {
    if (!(alpha > 0 && alpha < 1)) throw std::domain_error("coarea_check: alpha in (0,1) required");
    CoareaReport rep;
    rep.lhs = truncated_distance_integral(poly, alpha, t);

    // rhs = omega_alpha(t) + alpha int_0^t omega_alpha(r)/r dr.  The integral
    // uses a 512-point log-spaced trapezoid on [r0, t] plus the analytic head
    // from the small-r collar expansion P r - kappa r^2.
    const double P = polygon_perimeter(poly);
    const double kappa = polygon_is_convex(poly) ? corner_cot_sum(poly) : 0.0;
    const double r0 = 1e-3 * t;

    double head;
    if (polygon_is_convex(poly)) {
        head = alpha * (P * std::pow(r0, 1.0 - alpha) / (1.0 - alpha) -
                        kappa * std::pow(r0, 2.0 - alpha) / (2.0 - alpha));
    } else {
        // Collar area ~ P r for small r; corner correction unknown without
        // convexity, harmless at r0 = t/1000.
        head = alpha * P * std::pow(r0, 1.0 - alpha) / (1.0 - alpha);
    }

    const int N = 512;
    const double dlog = std::log(t / r0) / (N - 1);
    double body = 0.0;
    double prev = 0.0;
    for (int i = 0; i < N; ++i) {
        const double r = r0 * std::exp(dlog * i);
        const double omega = collar_area(poly, r) / std::pow(r, alpha);
        const double f = alpha * omega;  // integrand in log r: alpha * omega_alpha(r)
        if (i > 0) body += 0.5 * (prev + f) * dlog;
        prev = f;
        if (i == N - 1) rep.rhs = omega;  // omega_alpha(t)
    }
    rep.rhs += head + body;
    rep.gap = std::fabs(rep.lhs - rep.rhs) / std::max(std::fabs(rep.lhs), 1e-300);
    return rep;
}

AhlforsReport ahlfors_bound_check(const Polygon& poly, double alpha) {
    if (!(alpha >= 0 && alpha < 1))
        throw std::domain_error("ahlfors_bound_check: alpha in [0,1) required");
    AhlforsReport rep;
    rep.volume = polygon_area(poly);
    rep.perimeter = polygon_perimeter(poly);
    rep.value = distance_integral(poly, alpha);
    rep.fitted_constant =
        rep.value / (std::pow(rep.volume, 1.0 - alpha) * std::pow(rep.perimeter, alpha));
    rep.isoperimetric_ok = rep.volume <= rep.perimeter * rep.perimeter / (4.0 * kPi) + 1e-12;
    return rep;
}

} // namespace torsionlab
