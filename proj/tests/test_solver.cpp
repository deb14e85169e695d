#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <memory>

#include "torsionlab/barriers.hpp"
#include "torsionlab/measures.hpp"
#include "torsionlab/solver.hpp"

using namespace torsionlab;

namespace {
constexpr double kPi = 3.14159265358979323846;

// Classical double-series solution of the square torsion problem on (0,1)^2.
double square_torsion_center() {
    double u = 0.0;
    for (int k = 1; k <= 301; k += 2) {
        const double arg = k * kPi / 2.0;
        const double sech = arg < 700 ? 1.0 / std::cosh(arg) : 0.0;
        const double term = 4.0 / (k * k * k * kPi * kPi * kPi) * (1.0 - sech) *
                            std::sin(k * kPi / 2.0);
        u += term;
    }
    return u;
}

ScalarField solve_disk(double h) {
    const Polygon disk = make_regular_polygon(256, std::cos(kPi / 256));
    auto mesh = std::make_shared<TriMesh>(triangulate(disk, h, 0.5, 0));
    return poisson_solve(mesh);
}
} // namespace

TEST_CASE("disk ground truth at the center") {
    const ScalarField u = solve_disk(0.02);
    CHECK(u.residual <= 1e-10);
    const double center = interpolate(u, {0.0, 0.0});
    CHECK(std::fabs(center - 0.25) <= 2e-3);

    // Boundary values are exactly zero; interior values positive.
    const TriMesh& mesh = *u.mesh;
    for (std::size_t v = 0; v < mesh.node_count(); ++v) {
        if (mesh.boundary[v])
            CHECK(u.values[v] == 0.0);
        else
            CHECK(u.values[v] > 0.0);
    }
}

TEST_CASE("square center value against the Fourier oracle") {
    const double oracle = square_torsion_center();
    CHECK(oracle == doctest::Approx(0.073671).epsilon(2e-5));

    Polygon sq;
    sq.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    auto mesh = std::make_shared<TriMesh>(triangulate(sq, 0.03, 0.5, 2));
    const ScalarField u = poisson_solve(mesh);
    CHECK(interpolate(u, {0.5, 0.5}) == doctest::Approx(oracle).epsilon(2e-3));
}

TEST_CASE("interpolation") {
    Polygon sq;
    sq.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    auto mesh = std::make_shared<TriMesh>(triangulate(sq, 0.2, 0.5, 0));
    const ScalarField u = poisson_solve(mesh);

    for (std::size_t v = 0; v < mesh->node_count(); ++v)
        CHECK(interpolate(u, mesh->nodes[v]) == doctest::Approx(u.values[v]).epsilon(1e-12));

    const auto& T = mesh->triangles[0];
    const Vec2 c = (mesh->nodes[static_cast<std::size_t>(T[0])] +
                    mesh->nodes[static_cast<std::size_t>(T[1])] +
                    mesh->nodes[static_cast<std::size_t>(T[2])]) / 3.0;
    const double mean = (u.values[static_cast<std::size_t>(T[0])] +
                         u.values[static_cast<std::size_t>(T[1])] +
                         u.values[static_cast<std::size_t>(T[2])]) / 3.0;
    CHECK(interpolate(u, c) == doctest::Approx(mean).epsilon(1e-12));

    CHECK_THROWS_AS(interpolate(u, {2.0, 2.0}), OutOfDomainError);
}

TEST_CASE("degenerate meshes are rejected") {
    TriMesh m;
    m.nodes = {{0, 0}, {1, 0}, {0, 1}};
    m.triangles = {{0, 1, 2}};
    m.boundary = {1, 1, 1};
    m.nearest_corner = {-1, -1, -1};
    m.domain.vertices = m.nodes;
    m.target_h = 1.0;
    CHECK_THROWS_AS(poisson_solve(m), SolverFailure);
}

TEST_CASE("solve_sequence convergence on the disk") {
    const Polygon disk = make_regular_polygon(256, std::cos(kPi / 256));
    const SolveSequence seq = solve_sequence(disk, 0.1, 4);
    CHECK(seq.levels.size() == 4);
    // Center values converge (the limit is the polygon's own value, a few
    // 1e-5 below the disk's 0.25 because the 256-gon is inscribed).
    const double i01 = std::fabs(seq.levels[1].center_value - seq.levels[0].center_value);
    const double i23 = std::fabs(seq.levels[3].center_value - seq.levels[2].center_value);
    CHECK(i23 < i01);
    CHECK(std::fabs(seq.levels[3].center_value - 0.25) < 2e-3);
    // Observed order of the integral functional on the nested family.
    CHECK(seq.observed_order > 1.6);
    CHECK(seq.observed_order < 2.4);
    CHECK(seq.richardson_integral == doctest::Approx(kPi / 8).epsilon(5e-3));
    CHECK_THROWS_AS(solve_sequence(disk, 0.1, 1), std::invalid_argument);
}

TEST_CASE("determinism: repeated solves are bit-identical") {
    Polygon sq;
    sq.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    auto mesh = std::make_shared<TriMesh>(triangulate(sq, 0.05, 0.5, 2));
    const ScalarField u1 = poisson_solve(mesh);
    const ScalarField u2 = poisson_solve(mesh);
    REQUIRE(u1.values.size() == u2.values.size());
    for (std::size_t i = 0; i < u1.values.size(); ++i) CHECK(u1.values[i] == u2.values[i]);
    CHECK(u1.cg_iterations == u2.cg_iterations);

    auto mesh2 = std::make_shared<TriMesh>(triangulate(sq, 0.05, 0.5, 2));
    REQUIRE(mesh->node_count() == mesh2->node_count());
    for (std::size_t i = 0; i < mesh->node_count(); ++i) {
        CHECK(mesh->nodes[i].x == mesh2->nodes[i].x);
        CHECK(mesh->nodes[i].y == mesh2->nodes[i].y);
    }
}

TEST_CASE("global pointwise bounds") {
    Polygon hex = make_regular_polygon(6, 1.0);
    auto mesh = std::make_shared<TriMesh>(triangulate(hex, 0.08, 0.5, 3));
    const ScalarField u = poisson_solve(mesh);
    const double h = u.mesh_size_h;
    const double slack = 5 * h * h * std::log(1 / h);
    const auto desc = convex_descriptors(hex);

    for (std::size_t v = 0; v < mesh->node_count(); ++v) {
        if (mesh->boundary[v]) continue;
        const double delta = polygon_distance(hex, mesh->nodes[v]);
        CHECK(u.values[v] + slack >= delta * delta / 4.0);
        const double upper =
            (desc.circumradius * desc.circumradius -
             (mesh->nodes[v] - desc.circumcenter).norm2()) / 4.0;
        CHECK(u.values[v] <= upper + slack);
    }
}

TEST_CASE("barrier sandwich at corners") {
    Polygon sq;
    sq.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    auto mesh = std::make_shared<TriMesh>(triangulate(sq, 0.04, 0.5, 3));
    const ScalarField u = poisson_solve(mesh);
    const SandwichReport rep = barrier_sandwich_check(u, 0, kPi / 4, 0.5);
    CHECK(rep.lower_ok);
    CHECK(rep.upper_ok);
    CHECK(rep.samples > 200);

    Polygon hex = make_regular_polygon(6, 1.0);
    auto mh = std::make_shared<TriMesh>(triangulate(hex, 0.06, 0.5, 3));
    const ScalarField uh = poisson_solve(mh);
    const SandwichReport rh = barrier_sandwich_check(uh, 0, kPi / 3, 0.4);
    CHECK(rh.lower_ok);
    CHECK(rh.upper_ok);

    CHECK_THROWS_AS(barrier_sandwich_check(u, 0, kPi / 3, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(barrier_sandwich_check(u, 0, kPi / 4, 5.0), std::invalid_argument);
}

TEST_CASE("field json round trip") {
    Polygon sq;
    sq.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    auto mesh = std::make_shared<TriMesh>(triangulate(sq, 0.15, 0.5, 1));
    const ScalarField u = poisson_solve(mesh);
    const std::string path = "/tmp/torsionlab_field_test.json";
    field_to_json_file(u, path);
    const ScalarField back = field_from_json_file(path);
    REQUIRE(back.values.size() == u.values.size());
    for (std::size_t i = 0; i < u.values.size(); ++i)
        CHECK(back.values[i] == u.values[i]);
    CHECK(back.mesh->tri_count() == u.mesh->tri_count());
    CHECK(back.residual == u.residual);
    std::remove(path.c_str());
}
