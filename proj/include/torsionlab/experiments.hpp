#ifndef TORSIONLAB_EXPERIMENTS_HPP
#define TORSIONLAB_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "torsionlab/geometry.hpp"
#include "torsionlab/measures.hpp"

namespace torsionlab {

struct ExperimentConfig {
    std::string name;
    std::string domain_json;
    std::vector<double> betas;
    double h0 = 0.08;
    int levels = 2;
    double grading_q = 0.5;
    int grading_depth = 4;
    std::string out_dir;
    std::uint64_t seed = 424242;
    bool fail_on_divergent = false;
};

// Simple column table; cells are preformatted for byte-identical CSV output.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

struct ExperimentResult {
    std::string name;
    Table table;
    bool passed = true;
    std::vector<std::string> notes;   // one line per assertion, "PASS ..." / "FAIL ..."
};

std::string format_number(double v);

// Writes results.csv, results.json and plotdata/*.dat under cfg.out_dir
// (skipped when out_dir is empty).
void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result);

ExperimentResult exp_regular_polygon(const ExperimentConfig& cfg, const std::vector<int>& n_list);
ExperimentResult exp_sector_equivalence(const ExperimentConfig& cfg,
                                        const std::vector<double>& theta_list,
                                        const std::vector<double>& r_list);
ExperimentResult exp_polygon_finiteness(const ExperimentConfig& cfg, const Polygon& domain);
ExperimentResult exp_curvilinear_divergence(const ExperimentConfig& cfg, double beta0,
                                            const std::vector<double>& delta_list);
ExperimentResult exp_cusp(const ExperimentConfig& cfg, const std::vector<double>& p_list);
ExperimentResult exp_sublevel_chain(const ExperimentConfig& cfg, const std::string& test_function,
                                    const std::vector<double>& t_list);
ExperimentResult exp_convex_refined(const ExperimentConfig& cfg, const std::string& family);
ExperimentResult exp_coarea(const ExperimentConfig& cfg);

// The L-shaped hexagon used by the polygon-finiteness defaults.
Polygon make_l_shape();
// Truncated triangle family (vertices (-1,0), (1,0), (0,1), cut at 1 - 1/j).
Polygon make_truncated_triangle(int j);

} // namespace torsionlab

#endif
