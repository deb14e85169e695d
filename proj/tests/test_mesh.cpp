#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "torsionlab/geometry.hpp"
#include "torsionlab/mesh.hpp"

using namespace torsionlab;

namespace {
constexpr double kPi = 3.14159265358979323846;

Polygon unit_square() {
    Polygon p;
    p.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    return p;
}

void check_conforming(const TriMesh& mesh) {
    std::map<std::pair<int, int>, int> edge_count;
    for (std::size_t t = 0; t < mesh.tri_count(); ++t) {
        CHECK(mesh.triangle_area(t) > 0);
        const auto& T = mesh.triangles[t];
        for (int e = 0; e < 3; ++e) {
            int a = T[e], b = T[(e + 1) % 3];
            if (a > b) std::swap(a, b);
            edge_count[{a, b}]++;
        }
    }
    // No edge shared by more than two triangles.
    for (const auto& [edge, count] : edge_count) CHECK(count <= 2);
}
} // namespace

TEST_CASE("square mesh basics") {
    const TriMesh mesh = triangulate(unit_square(), 0.25, 0.5, 0);
    CHECK(mesh.total_area() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(mesh.tri_count() >= 32);
    CHECK(mesh.tri_count() <= 256);
    CHECK(mesh.min_angle_deg >= 20.0);
    check_conforming(mesh);
    for (std::size_t v = 0; v < mesh.node_count(); ++v) {
        const double d = polygon_distance(unit_square(), mesh.nodes[v]);
        if (mesh.boundary[v])
            CHECK(d <= 1e-12 * std::sqrt(2.0));
        else
            CHECK(d > 1e-9);
    }
    for (const auto& T : mesh.triangles) {
        const bool all_boundary = mesh.boundary[static_cast<std::size_t>(T[0])] &&
                                  mesh.boundary[static_cast<std::size_t>(T[1])] &&
                                  mesh.boundary[static_cast<std::size_t>(T[2])];
        CHECK_FALSE(all_boundary);
    }
}

TEST_CASE("corner grading") {
    const TriMesh mesh = triangulate(unit_square(), 0.25, 0.5, 3);
    CHECK(mesh.total_area() == doctest::Approx(1.0).epsilon(1e-10));
    const double s_min = 0.25 * std::pow(0.5, 3);
    for (const Vec2 corner : {Vec2{0, 0}, Vec2{1, 0}, Vec2{1, 1}, Vec2{0, 1}}) {
        double best = 1e30;
        for (const auto& T : mesh.triangles) {
            double dmin = 1e30, diam = 0.0;
            for (int k = 0; k < 3; ++k) {
                dmin = std::min(dmin, dist(mesh.nodes[static_cast<std::size_t>(T[k])], corner));
                diam = std::max(diam, dist(mesh.nodes[static_cast<std::size_t>(T[k])],
                                           mesh.nodes[static_cast<std::size_t>(T[(k + 1) % 3])]));
            }
            if (dmin < 1e-12) best = std::min(best, diam);
        }
        CHECK(best <= s_min * (1 + 1e-9));
    }
    CHECK(mesh.grading_depth == 3);
}

TEST_CASE("mesh rejects bad input") {
    Polygon degenerate;
    degenerate.vertices = {{0, 0}, {1, 0}};
    CHECK_THROWS_AS(triangulate(degenerate, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(triangulate(unit_square(), -0.1), std::invalid_argument);
    CHECK_THROWS_AS(triangulate(unit_square(), 0.25, 1.5, 2), std::invalid_argument);
}

TEST_CASE("regular polygon and L-shape meshes") {
    const Polygon hex = make_regular_polygon(6, 1.0);
    const TriMesh mh = triangulate(hex, 0.2, 0.5, 2);
    CHECK(mh.total_area() == doctest::Approx(polygon_area(hex)).epsilon(1e-10));
    CHECK(mh.min_angle_deg >= 20.0);
    check_conforming(mh);

    Polygon lshape;
    lshape.vertices = {{0, 0}, {1, 0}, {1, 0.5}, {0.5, 0.5}, {0.5, 1}, {0, 1}};
    const TriMesh ml = triangulate(lshape, 0.1, 0.5, 3);
    CHECK(ml.total_area() == doctest::Approx(polygon_area(lshape)).epsilon(1e-10));
    CHECK(ml.min_angle_deg >= 20.0);
    check_conforming(ml);
    CHECK(!ml.corner_vertex.empty());
}

TEST_CASE("disk approximation mesh") {
    const Polygon disk = make_regular_polygon(256, std::cos(kPi / 256));
    const TriMesh m = triangulate(disk, 0.05, 0.5, 0);
    CHECK(m.total_area() == doctest::Approx(polygon_area(disk)).epsilon(1e-10));
    CHECK(m.min_angle_deg >= 20.0);
}

TEST_CASE("curvilinear spout mesh with size field") {
    const DomainSpec spec = domain_from_json_text(
        "{\"type\":\"curvilinear\",\"beta\":0.75,\"epsilon\":0.3,\"m\":128,\"cut\":0.02}");
    MeshOptions opt;
    opt.h = 0.08;
    opt.grading_depth = 2;
    opt.size_field = spec.size_field;
    const TriMesh m = triangulate(spec.polygon, opt);
    CHECK(m.total_area() == doctest::Approx(polygon_area(spec.polygon)).epsilon(1e-9));
    check_conforming(m);
    // Elements near the cut resolve the throat width.
    const double w_cut = 0.3 * 0.02 * 0.02;
    double near_cut_diam = 1e30;
    for (const auto& T : m.triangles) {
        const Vec2 c = (m.nodes[static_cast<std::size_t>(T[0])] +
                        m.nodes[static_cast<std::size_t>(T[1])] +
                        m.nodes[static_cast<std::size_t>(T[2])]) / 3.0;
        if (c.x < 0.03) {
            for (int k = 0; k < 3; ++k)
                near_cut_diam = std::min(
                    near_cut_diam, dist(m.nodes[static_cast<std::size_t>(T[k])],
                                        m.nodes[static_cast<std::size_t>(T[(k + 1) % 3])]));
        }
    }
    CHECK(near_cut_diam <= w_cut);
}
