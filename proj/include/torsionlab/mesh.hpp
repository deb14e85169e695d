#ifndef TORSIONLAB_MESH_HPP
#define TORSIONLAB_MESH_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "torsionlab/geometry.hpp"

namespace torsionlab {

// Conforming triangulation of a polygon.  Triangles are positively oriented;
// boundary flags mark exactly the nodes on the polygon boundary (they are
// placed there by construction, never by geometric snapping).
struct TriMesh {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::uint8_t> boundary;     // per-node flag
    std::vector<int> nearest_corner;        // per-node corner tag, -1 = none
    std::vector<std::size_t> corner_vertex; // polygon index per tagged corner
    Polygon domain;
    double target_h = 0.0;
    double grading_ratio = 0.5;
    int grading_depth = 0;
    double min_angle_deg = 0.0;

    std::size_t node_count() const { return nodes.size(); }
    std::size_t tri_count() const { return triangles.size(); }
    double triangle_area(std::size_t t) const;
    double total_area() const;
    std::size_t interior_node_count() const;
};

struct MeshOptions {
    double h = 0.1;
    double grading_ratio = 0.5;                     // q in (0,1)
    int grading_depth = 0;
    std::function<double(const Vec2&)> size_field;  // optional extra size cap
    int smoothing_rounds = 8;
    double min_angle_deg = 20.0;
    int max_refine_passes = 220;
    int quality_retries = 3;
};

TriMesh triangulate(const Polygon& poly, const MeshOptions& opt);
TriMesh triangulate(const Polygon& poly, double h, double q = 0.5, int depth = 0);

// Uniform red refinement: every triangle splits into four via edge midpoints.
// Shapes (and the min angle) are preserved exactly; boundary midpoints lie on
// the polygon by construction.
TriMesh uniform_refine(const TriMesh& mesh);

double triangle_min_angle_deg(const Vec2& a, const Vec2& b, const Vec2& c);

} // namespace torsionlab

#endif
