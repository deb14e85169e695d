#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "torsionlab/geometry.hpp"

using namespace torsionlab;

namespace {
constexpr double kPi = 3.14159265358979323846;

Polygon unit_square() {
    Polygon p;
    p.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    return p;
}
} // namespace

TEST_CASE("regular polygon geometry") {
    // circumradius = inradius / cos(pi/N)
    const Polygon sq = make_regular_polygon(4, 1.0);
    CHECK(sq.size() == 4);
    for (const Vec2& v : sq.vertices) CHECK(v.norm() == doctest::Approx(std::sqrt(2.0)));

    const Polygon hex = make_regular_polygon(6, 1.0);
    for (const Vec2& v : hex.vertices) CHECK(v.norm() == doctest::Approx(2.0 / std::sqrt(3.0)));

    const Polygon big = make_regular_polygon(64, 1.0);
    for (const Vec2& v : big.vertices)
        CHECK(v.norm() == doctest::Approx(1.0 / std::cos(kPi / 64)).epsilon(1e-12));
    CHECK(1.0 / std::cos(kPi / 64) == doctest::Approx(1.001206).epsilon(1e-5));

    CHECK_THROWS_AS(make_regular_polygon(2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_regular_polygon(5, -1.0), std::invalid_argument);

    // An edge midpoint lies on the positive x-axis.
    const Vec2 mid = (sq.vertices[3] + sq.vertices[0]) * 0.5;
    CHECK(mid.y == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(mid.x == doctest::Approx(1.0));
}

TEST_CASE("polygon distance") {
    const Polygon sq = unit_square();
    CHECK(polygon_distance(sq, {0.5, 0.5}) == doctest::Approx(0.5));
    CHECK(polygon_distance(sq, {0.25, 0.5}) == doctest::Approx(0.25));
    const Polygon hex = make_regular_polygon(6, 1.0);
    CHECK(polygon_distance(hex, {0, 0}) == doctest::Approx(1.0));
    // Outside points get their distance too.
    CHECK(polygon_distance(sq, {2.0, 0.5}) == doctest::Approx(1.0));
}

TEST_CASE("polygon distance is 1-Lipschitz") {
    const Polygon hex = make_regular_polygon(6, 1.0);
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    for (int i = 0; i < 10000; ++i) {
        const Vec2 x{coord(rng), coord(rng)};
        const Vec2 y{coord(rng), coord(rng)};
        const double dd = std::fabs(polygon_distance(hex, x) - polygon_distance(hex, y));
        CHECK(dd <= dist(x, y) + 1e-12);
    }
}

TEST_CASE("convex descriptors") {
    const auto d = convex_descriptors(unit_square());
    CHECK(d.inradius == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(d.circumradius == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));
    CHECK(d.eccentricity == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));

    for (int N : {3, 5, 8, 16}) {
        const auto dn = convex_descriptors(make_regular_polygon(N, 1.0));
        CHECK(dn.inradius == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(dn.circumradius == doctest::Approx(1.0 / std::cos(kPi / N)).epsilon(1e-10));
        CHECK(dn.eccentricity > 1.0);
    }

    const auto dr = convex_descriptors(make_rectangle(0, 1, -0.1, 0.1));
    CHECK(dr.inradius == doctest::Approx(0.1).epsilon(1e-7));
    CHECK(dr.circumradius == doctest::Approx(std::sqrt(0.25 + 0.01)).epsilon(1e-10));
    CHECK(dr.eccentricity == doctest::Approx(5.0990195).epsilon(1e-5));

    Polygon lshape;
    lshape.vertices = {{0, 0}, {1, 0}, {1, 0.5}, {0.5, 0.5}, {0.5, 1}, {0, 1}};
    CHECK_THROWS_AS(convex_descriptors(lshape), NotConvexError);
}

TEST_CASE("max admissible radius") {
    CHECK(max_admissible_radius(unit_square()) == doctest::Approx(0.5).epsilon(1e-7));
    for (int N : {4, 6, 12}) {
        CHECK(max_admissible_radius(make_regular_polygon(N, 1.0)) ==
              doctest::Approx(1.0).epsilon(1e-7));
    }
    // Truncated triangles: R <= inradius always.  At j = 4 the top/bottom
    // pair binds both quantities (R = inradius = 3/8 exactly); from j = 6 on
    // the short top edge forces R strictly below the inradius, and R -> 0.
    {
        Polygon t4;
        t4.vertices = {{-1, 0}, {1, 0}, {0.25, 0.75}, {-0.25, 0.75}};
        CHECK(max_admissible_radius(t4) == doctest::Approx(0.375).epsilon(1e-6));
        CHECK(convex_descriptors(t4).inradius == doctest::Approx(0.375).epsilon(1e-6));
    }
    double prev_R = 1.0;
    for (int j : {6, 8, 16}) {
        const double y = 1.0 - 1.0 / j;
        Polygon trunc;
        trunc.vertices = {{-1, 0}, {1, 0}, {1 - y, y}, {-(1 - y), y}};
        const double R = max_admissible_radius(trunc);
        const double inr = convex_descriptors(trunc).inradius;
        CHECK(R < inr - 1e-6);
        // Analytic value 1 / (j (sqrt(2) - 1)) once the incircle clears the cut.
        CHECK(R == doctest::Approx(1.0 / (j * (std::sqrt(2.0) - 1.0))).epsilon(1e-5));
        CHECK(R < prev_R);
        prev_R = R;
    }

    // Always bounded by the inradius; equality for regular polygons.
    for (int N : {3, 7, 9}) {
        const Polygon p = make_regular_polygon(N, 0.7);
        CHECK(max_admissible_radius(p) <= convex_descriptors(p).inradius + 1e-7);
    }
}

TEST_CASE("curvilinear triangle") {
    const Polygon p = make_curvilinear_triangle(0.75, 0.1, 64);
    CHECK(p.size() == 66);
    // Top curve is y = 0.1 x^2 (1/(2 beta - 1) = 2).
    for (std::size_t i = 2; i < p.size(); ++i) {
        const Vec2 v = p[i];
        CHECK(v.y == doctest::Approx(0.1 * v.x * v.x).epsilon(1e-12));
    }
    const Polygon q = make_curvilinear_triangle(0.6, 0.05, 128);
    for (std::size_t i = 2; i < q.size(); ++i) {
        const Vec2 v = q[i];
        CHECK(v.y == doctest::Approx(0.05 * std::pow(v.x, 5.0)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(make_curvilinear_triangle(0.5, 0.1, 64), std::invalid_argument);
    CHECK_THROWS_AS(make_curvilinear_triangle(1.0, 0.1, 64), std::invalid_argument);
    CHECK_THROWS_AS(make_curvilinear_triangle(0.75, 0.1, 8), std::invalid_argument);
}

TEST_CASE("cusp domains") {
    const CuspProfile prof = CuspProfile::power_cusp(2.0, 0.5, 1.0);
    const Polygon p = make_cusp_domain(prof, 64);
    validate_polygon(p);
    // Wall points satisfy |x| = 0.5 y^2.
    int wall_checked = 0;
    for (const Vec2& v : p.vertices) {
        if (v.y > 1e-6 && v.y < 1.0 - 1e-9 && std::fabs(v.x) > 0) {
            CHECK(std::fabs(v.x) == doctest::Approx(0.5 * v.y * v.y).epsilon(1e-9));
            ++wall_checked;
        }
    }
    CHECK(wall_checked > 50);

    CHECK_THROWS_AS(CuspProfile::power_cusp(1.0, 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(CuspProfile::tabulated({0.0, 0.5, 1.0}, {0.1, 0.2, 0.4}, 0.5),
                    std::invalid_argument);
    // A valid tabulated profile passes.
    const CuspProfile tab = CuspProfile::tabulated({0.0, 0.5, 1.0}, {0.0, 0.2, 0.4}, 0.5);
    CHECK(tab.eval(0.25) == doctest::Approx(0.1));
}

TEST_CASE("sector polygons") {
    const Polygon chord = make_sector_polygon(kPi / 6, 1.0, SectorClosure::Chord);
    CHECK(chord.size() == 3);
    const Polygon arc = make_sector_polygon(kPi / 2, 1.0, SectorClosure::Arc, 32);
    CHECK(arc.size() == 34);
    CHECK(polygon_area(arc) < kPi / 2);  // inscribed
    CHECK(polygon_area(arc) > kPi / 2 * 0.99);
    CHECK_THROWS_AS(make_sector_polygon(kPi / 2, 1.0, SectorClosure::Chord), std::invalid_argument);
}

TEST_CASE("collar area and offsets") {
    const Polygon sq = unit_square();
    for (double r : {0.1, 0.2, 0.4}) {
        CHECK(collar_area(sq, r) == doctest::Approx(4 * r - 4 * r * r).epsilon(1e-12));
    }
    // Non-convex path: L-shape, grid counting; loose tolerance.
    Polygon lshape;
    lshape.vertices = {{0, 0}, {1, 0}, {1, 0.5}, {0.5, 0.5}, {0.5, 1}, {0, 1}};
    const double a = collar_area(lshape, 0.05, 512);
    CHECK(a > 0.1);
    CHECK(a < 0.25);
}

TEST_CASE("domain json round trip") {
    const DomainSpec spec =
        domain_from_json_text("{\"type\":\"regular\",\"n\":6,\"inradius\":1.0}");
    CHECK(spec.polygon.size() == 6);
    const std::string txt = domain_to_json_text(spec.polygon);
    const DomainSpec back = domain_from_json_text(txt);
    CHECK(back.polygon.size() == 6);
    CHECK(back.polygon[0].x == doctest::Approx(spec.polygon[0].x).epsilon(1e-15));

    const DomainSpec sec = domain_from_json_text(
        "{\"type\":\"sector\",\"theta\":0.7853981633974483,\"r\":2.0,\"closure\":\"chord\"}");
    CHECK(sec.polygon.size() == 3);

    const DomainSpec cur = domain_from_json_text(
        "{\"type\":\"curvilinear\",\"beta\":0.75,\"epsilon\":0.1,\"m\":64}");
    CHECK(cur.polygon.size() == 66);
    CHECK(cur.size_field({0.5, 0.01}) > 0);
}

TEST_CASE("eccentricity exceeds one for polygons") {
    for (int N : {3, 4, 6, 12, 32}) {
        const auto d = convex_descriptors(make_regular_polygon(N, 1.0));
        CHECK(d.eccentricity > 1.0);
    }
}
