#ifndef TORSIONLAB_SOLVER_HPP
#define TORSIONLAB_SOLVER_HPP

#include <memory>
#include <string>
#include <vector>

#include "torsionlab/mesh.hpp"

namespace torsionlab {

// Piecewise-linear finite element field on a TriMesh.
struct ScalarField {
    std::shared_ptr<const TriMesh> mesh;
    std::vector<double> values;       // one per node; 0 at boundary nodes
    double residual = 0.0;            // final relative CG residual
    double mesh_size_h = 0.0;
    int cg_iterations = 0;
    int clamped_nodes = 0;            // negative interior values zeroed

    double max_value() const;
};

// Galerkin P1 solution of -Laplace(u) = 1 with homogeneous Dirichlet data.
ScalarField poisson_solve(const TriMesh& mesh);
ScalarField poisson_solve(std::shared_ptr<const TriMesh> mesh);

// Barycentric-linear interpolation; point location by walking with an
// exhaustive fallback.  Throws OutOfDomainError outside the mesh.
double interpolate(const ScalarField& field, const Vec2& x);

// Triangle index containing x, or -1.
int locate_triangle(const TriMesh& mesh, const Vec2& x);

struct SolveLevel {
    ScalarField field;
    double h;
    double integral_u;         // torsional rigidity functional
    double center_value;       // value at the domain's Chebyshev-ish anchor
};

struct SolveSequence {
    std::vector<SolveLevel> levels;
    double richardson_integral = 0.0;  // extrapolated integral of u
    double observed_order = 0.0;       // convergence order of integral_u
};

// Solve on meshes h0, h0/2, ..., h0/2^(levels-1).
SolveSequence solve_sequence(const Polygon& domain, double h0, int levels,
                             const MeshOptions& base = MeshOptions{});

struct SandwichReport {
    double min_lower_gap;   // min over samples of u_h - sector barrier
    double min_upper_gap;   // min over samples of (upper barrier) - u_h
    double slack;           // discretisation budget 5 h^2 log(1/h)
    bool lower_ok;
    bool upper_ok;
    std::string upper_kind; // "triangle" or "disk"
    int samples;
};

// Maximum-principle sandwich at a polygon corner: the sector S_{theta,r}
// placed at the corner must lie inside the domain.
SandwichReport barrier_sandwich_check(const ScalarField& field, std::size_t corner_vertex,
                                      double theta, double r);

// Field JSON (mesh + nodal values + residual metadata).
void field_to_json_file(const ScalarField& field, const std::string& path);
ScalarField field_from_json_file(const std::string& path);

} // namespace torsionlab

#endif
