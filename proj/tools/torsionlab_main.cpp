// torsionlab command line: experiment drivers and one-shot computations.
//
//   torsionlab <experiment> [flags] --out dir/
//
// Exit codes: 0 all assertions passed, 2 assertion failure, 3 numerical failure.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "torsionlab/barriers.hpp"
#include "torsionlab/errors.hpp"
#include "torsionlab/experiments.hpp"
#include "torsionlab/measures.hpp"
#include "torsionlab/solver.hpp"
#include "torsionlab/specfun.hpp"

using namespace torsionlab;

namespace {

int finish(const ExperimentConfig& cfg, const ExperimentResult& res) {
    write_outputs(cfg, res);
    for (const auto& line : res.notes) std::cout << line << "\n";
    std::cout << (res.passed ? "ALL PASS" : "ASSERTION FAILURE") << " [" << res.name << "]\n";
    return res.passed ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"torsionlab: torsion-function beta-integral laboratory"};
    app.require_subcommand(1);

    // Shared experiment options.
    ExperimentConfig cfg;
    std::string domain_path;
    std::vector<int> n_list{8, 16, 32, 64};
    std::vector<double> theta_list{3.14159265358979323846 / 6, 3.14159265358979323846 / 4,
                                   3.14159265358979323846 / 2};
    std::vector<double> r_list{0.5, 1.0, 2.0};
    std::vector<double> delta_list{1e-1, 10 * 1e-3 * std::sqrt(10.0), 1e-2, 1e-3 * std::sqrt(10.0), 1e-3};
    std::vector<double> t_list{0.25, 0.5, 1.0};
    std::vector<double> p_list{1.5, 2.0, 3.0};
    double beta0 = 0.75;
    std::string family = "regular";
    std::string test_function = "paraboloid";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--betas", cfg.betas, "beta values");
        sub->add_option("--h0", cfg.h0, "base mesh size");
        sub->add_option("--levels", cfg.levels, "refinement levels");
        sub->add_option("--grading-q", cfg.grading_q, "corner grading ratio");
        sub->add_option("--grading-depth", cfg.grading_depth, "corner grading depth");
        sub->add_option("--seed", cfg.seed, "seed recorded in outputs");
        sub->add_flag("--fail-on-divergent", cfg.fail_on_divergent,
                      "exit nonzero when a divergent case is tabulated");
    };

    auto* sc_regular = app.add_subcommand("regular-polygon", "regular polygon asymptotics");
    add_common(sc_regular);
    sc_regular->add_option("--n-list", n_list, "polygon side counts");

    auto* sc_sector = app.add_subcommand("sector", "sector equivalence");
    add_common(sc_sector);
    sc_sector->add_option("--theta-list", theta_list, "sector half-apertures");
    sc_sector->add_option("--r-list", r_list, "sector radii");

    auto* sc_polygon = app.add_subcommand("polygon", "polygon finiteness");
    add_common(sc_polygon);
    sc_polygon->add_option("--domain", domain_path, "domain JSON file (default: L-shape)");

    auto* sc_curv = app.add_subcommand("curvilinear", "curvilinear triangle divergence");
    add_common(sc_curv);
    sc_curv->add_option("--beta0", beta0, "domain exponent beta0 in (1/2, 1)");
    sc_curv->add_option("--delta-list", delta_list, "truncation thresholds");

    auto* sc_cusp = app.add_subcommand("cusp", "cusp integrability criterion");
    add_common(sc_cusp);
    sc_cusp->add_option("--p-list", p_list, "cusp powers");

    auto* sc_sublevel = app.add_subcommand("sublevel", "sublevel chain inequality");
    add_common(sc_sublevel);
    sc_sublevel->add_option("--test-function", test_function, "paraboloid | quartic | ellipse");
    sc_sublevel->add_option("--t-list", t_list, "sublevel thresholds");

    auto* sc_convex = app.add_subcommand("convex-refined", "convex polygon refinement");
    add_common(sc_convex);
    sc_convex->add_option("--family", family, "regular | rectangles | truncated-triangles");

    auto* sc_coarea = app.add_subcommand("coarea", "coarea identity checks");
    add_common(sc_coarea);

    // One-shot computations.
    auto* sc_exponent = app.add_subcommand("exponent", "corner exponent alpha and Lambda");
    int exp_n = 2;
    double exp_theta = 1.0;
    sc_exponent->add_option("--n", exp_n, "dimension")->required();
    sc_exponent->add_option("--theta", exp_theta, "half-aperture")->required();

    auto* sc_sc = app.add_subcommand("sector-constant", "closed-form sector constant");
    double sc_theta = 1.0, sc_beta = 0.5;
    sc_sc->add_option("--theta", sc_theta, "half-aperture")->required();
    sc_sc->add_option("--beta", sc_beta, "beta in (0,1)")->required();

    auto* sc_solve = app.add_subcommand("solve", "solve the Saint Venant problem");
    std::string solve_domain, solve_out = "field.json";
    double solve_h = 0.02;
    int solve_levels = 1;
    sc_solve->add_option("--domain", solve_domain, "domain JSON file")->required();
    sc_solve->add_option("--h", solve_h, "target mesh size");
    sc_solve->add_option("--levels", solve_levels, "refinement levels");
    sc_solve->add_option("--out", solve_out, "output field JSON");
    double solve_q = 0.5;
    int solve_depth = 4;
    sc_solve->add_option("--grading-q", solve_q, "corner grading ratio");
    sc_solve->add_option("--grading-depth", solve_depth, "corner grading depth");

    auto* sc_bi = app.add_subcommand("beta-integral", "beta-integral of a stored field");
    std::string bi_field, bi_out = "result.json";
    double bi_beta = 0.5;
    sc_bi->add_option("--field", bi_field, "field JSON file")->required();
    sc_bi->add_option("--beta", bi_beta, "beta in (0,1)")->required();
    sc_bi->add_option("--out", bi_out, "output result JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sc_exponent->parsed()) {
            const CornerExponent ce = corner_exponent(exp_n, exp_theta);
            nlohmann::json j{{"n", ce.n}, {"theta", ce.theta}, {"alpha", ce.alpha},
                             {"lambda", ce.lambda}};
            std::cout << j.dump() << "\n";
            return 0;
        }
        if (sc_sc->parsed()) {
            nlohmann::json j{{"C", sector_constant(sc_theta, sc_beta)},
                             {"r_exponent", 2.0 * (1.0 - sc_beta)}};
            std::cout << j.dump() << "\n";
            return 0;
        }
        if (sc_solve->parsed()) {
            const DomainSpec spec = domain_from_json_file(solve_domain);
            MeshOptions opt;
            opt.h = solve_h;
            opt.grading_ratio = solve_q;
            opt.grading_depth = solve_depth;
            opt.size_field = spec.size_field;
            for (int level = 0; level < solve_levels; ++level) {
                MeshOptions lv = opt;
                lv.h = solve_h / std::pow(2.0, level);
                auto mesh = std::make_shared<TriMesh>(triangulate(spec.polygon, lv));
                ScalarField u = poisson_solve(mesh);
                const std::string path = solve_levels == 1
                                             ? solve_out
                                             : solve_out + ".level" + std::to_string(level);
                field_to_json_file(u, path);
                std::cout << "level " << level << ": h=" << lv.h << " nodes=" << mesh->node_count()
                          << " residual=" << u.residual << " -> " << path << "\n";
            }
            return 0;
        }
        if (sc_bi->parsed()) {
            const ScalarField u = field_from_json_file(bi_field);
            const BetaIntegralResult r = beta_integral(u, bi_beta);
            nlohmann::json j;
            j["beta"] = r.beta;
            j["value"] = r.value;
            j["error_estimate"] = r.error_estimate;
            j["tainted"] = r.tainted;
            j["clamped_nodes"] = r.clamped_nodes;
            for (const auto& [tag, val] : r.corner_contributions)
                j["corner_contributions"].push_back({{"corner", tag}, {"value", val}});
            for (const auto& [h, val] : r.refinement_history)
                j["refinement_history"].push_back({{"h", h}, {"value", val}});
            std::ofstream out(bi_out);
            out << j.dump(2) << "\n";
            std::cout << "beta-integral " << r.value << " +- " << r.error_estimate << " -> "
                      << bi_out << "\n";
            return 0;
        }

        if (cfg.betas.empty()) cfg.betas = {0.5};

        if (sc_regular->parsed()) {
            cfg.name = "regular-polygon";
            if (cfg.betas.size() == 1 && cfg.betas[0] == 0.5) cfg.betas = {0.25, 0.5};
            return finish(cfg, exp_regular_polygon(cfg, n_list));
        }
        if (sc_sector->parsed()) {
            cfg.name = "sector";
            return finish(cfg, exp_sector_equivalence(cfg, theta_list, r_list));
        }
        if (sc_polygon->parsed()) {
            cfg.name = "polygon";
            Polygon domain = domain_path.empty() ? make_l_shape()
                                                 : domain_from_json_file(domain_path).polygon;
            cfg.domain_json = domain_path.empty() ? "l-shape" : domain_path;
            if (cfg.betas.size() == 1 && cfg.betas[0] == 0.5)
                cfg.betas = {0.25, 0.5, 0.75, 0.9};
            if (cfg.levels < 3) cfg.levels = 3;
            return finish(cfg, exp_polygon_finiteness(cfg, domain));
        }
        if (sc_curv->parsed()) {
            cfg.name = "curvilinear";
            return finish(cfg, exp_curvilinear_divergence(cfg, beta0, delta_list));
        }
        if (sc_cusp->parsed()) {
            cfg.name = "cusp";
            if (cfg.betas.size() == 1 && cfg.betas[0] == 0.5) {
                cfg.betas.clear();
                for (int i = 1; i <= 9; ++i) cfg.betas.push_back(0.1 * i);
            }
            return finish(cfg, exp_cusp(cfg, p_list));
        }
        if (sc_sublevel->parsed()) {
            cfg.name = "sublevel";
            return finish(cfg, exp_sublevel_chain(cfg, test_function, t_list));
        }
        if (sc_convex->parsed()) {
            cfg.name = "convex-refined";
            return finish(cfg, exp_convex_refined(cfg, family));
        }
        if (sc_coarea->parsed()) {
            cfg.name = "coarea";
            return finish(cfg, exp_coarea(cfg));
        }
    } catch (const MeshingFailure& e) {
        std::cerr << "numerical failure (meshing): " << e.what() << "\n";
        return 3;
    } catch (const SolverFailure& e) {
        std::cerr << "numerical failure (solver): " << e.what() << "\n";
        return 3;
    } catch (const IntegrationFailure& e) {
        std::cerr << "numerical failure (integration): " << e.what() << "\n";
        return 3;
    } catch (const SearchFailure& e) {
        std::cerr << "numerical failure (search): " << e.what() << "\n";
        return 3;
    } catch (const FitFailure& e) {
        std::cerr << "numerical failure (fit): " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
