#include "depth_hjb/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "depth_hjb/io.hpp"
#include "depth_hjb/oracle.hpp"
#include "depth_hjb/parallel.hpp"
#include "depth_hjb/report.hpp"
#include "depth_hjb/solver.hpp"
#include "depth_hjb/version.hpp"

namespace depth_hjb {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CommonOpts {
    std::string density_path;
    double dx = 1.0 / 64.0;
    std::string scheme = "fm";
    std::string rhs = "analytic";
    std::int64_t samples = 12000;
    double band = 0.0;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::vector<double> box;  // x0 y0 x1 y1 -> TruncatedBox
    int margin = 2;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_dx = true) {
    cmd->add_option("--density", o.density_path, "density specification JSON")->required();
    if (needs_dx) cmd->add_option("--dx", o.dx, "grid spacing");
    cmd->add_option("--scheme", o.scheme, "fm|lf")->check(CLI::IsMember({"fm", "lf"}));
    cmd->add_option("--rhs", o.rhs, "analytic|band")->check(CLI::IsMember({"analytic", "band"}));
    cmd->add_option("--samples", o.samples, "sample count for the band estimator");
    cmd->add_option("--band", o.band, "band halfwidth (0 = diameter/100)");
    cmd->add_option("--seed", o.seed, "RNG seed (echoed in the manifest)");
    cmd->add_option("--out", o.out_dir, "output directory")->required();
    cmd->add_option("--box", o.box, "x0 y0 x1 y1 truncation box")->expected(4);
    cmd->add_option("--margin", o.margin, "extra boundary cells around the support hull");
}

SolverConfig make_solver_config(const CommonOpts& o) {
    SolverConfig cfg;
    cfg.scheme = o.scheme == "lf" ? Scheme::LaxFriedrichsSweeping : Scheme::FastMarchingFixedPoint;
    cfg.slice_cfg.method = o.rhs == "band" ? SliceMethod::SampleBand : SliceMethod::Analytic;
    cfg.slice_cfg.sample_count = o.samples;
    cfg.slice_cfg.band_halfwidth = o.band;
    cfg.slice_cfg.rng_seed = o.seed;
    return cfg;
}

GridSpec make_grid(const Density& d, const CommonOpts& o) {
    if (!o.box.empty()) {
        return GridSpec::cover({o.box[0], o.box[1]}, {o.box[2], o.box[3]}, o.dx, 0,
                               BoundaryKind::TruncatedBox);
    }
    if (!d.has_bounded_support()) {
        auto [lo, hi] = d.support_bbox();
        return GridSpec::cover(lo, hi, o.dx, 0, BoundaryKind::TruncatedBox);
    }
    auto [lo, hi] = d.support_bbox();
    return GridSpec::cover(lo, hi, o.dx, o.margin, BoundaryKind::SupportHull);
}

json params_json(const CommonOpts& o) {
    return json{{"dx", o.dx},         {"scheme", o.scheme}, {"rhs", o.rhs},
                {"samples", o.samples}, {"band", o.band},     {"seed", o.seed},
                {"box", o.box},        {"margin", o.margin}};
}

// The manifest goes to disk before any data file so every artifact directory
// is reproducible from it.
void write_manifest(const CommonOpts& o, const std::string& subcommand,
                    const std::vector<std::string>& argv, const json& density_echo,
                    const json& extra = json::object()) {
    fs::create_directories(o.out_dir);
    json m{{"tool", "depth-hjb"},
           {"git_describe", kGitDescribe},
           {"subcommand", subcommand},
           {"argv", argv},
           {"density", density_echo},
           {"parameters", params_json(o)}};
    for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
    write_json_file(o.out_dir + "/manifest.json", m);
}

GridField reference_field(const Density& d, const GridSpec& spec) {
    if (d.closed_form_depth({0.0, 0.0}).has_value()) {
        GridField ref = oracle_depth_field(d, spec, DirectionSearchConfig{});
        for (int j = 0; j < spec.ny; ++j) {
            for (int i = 0; i < spec.nx; ++i) {
                ref.at(i, j) = *d.closed_form_depth(spec.node(i, j));
            }
        }
        return ref;
    }
    return oracle_depth_field(d, spec);
}

int cmd_solve(const CommonOpts& o, const std::vector<std::string>& argv) {
    Density d = load_density(o.density_path);
    write_manifest(o, "solve", argv, load_density_json(o.density_path));
    GridSpec grid = make_grid(d, o);
    SolveReport rep = solve_2d(d, grid, make_solver_config(o));
    write_field_csv(o.out_dir + "/field.csv", rep.field);
    write_json_file(o.out_dir + "/field.json",
                    json{{"grid", grid_spec_json(grid)},
                         {"diagnostics", solve_diagnostics_json(rep)},
                         {"seed", o.seed}});
    std::cerr << "solve: " << rep.iterations << " iterations, " << rep.runtime_ms << " ms\n";
    return 0;
}

int cmd_oracle(const CommonOpts& o, const std::string& grid_arg, const std::string& points_path,
               const std::vector<std::string>& argv) {
    Density d = load_density(o.density_path);
    write_manifest(o, "oracle", argv, load_density_json(o.density_path),
                   json{{"grid", grid_arg}, {"points", points_path}});

    std::vector<Vec2> pts;
    if (!points_path.empty()) {
        pts = read_points_csv(points_path);
    } else {
        int nx = 33, ny = 33;
        if (!grid_arg.empty()) {
            auto xpos = grid_arg.find('x');
            if (xpos == std::string::npos) throw DomainError("--grid expects NXxNY, e.g. 33x33");
            nx = std::stoi(grid_arg.substr(0, xpos));
            ny = std::stoi(grid_arg.substr(xpos + 1));
        }
        if (nx < 2 || ny < 2) throw DomainError("--grid needs at least 2 nodes per axis");
        Vec2 lo, hi;
        if (!o.box.empty()) {
            lo = {o.box[0], o.box[1]};
            hi = {o.box[2], o.box[3]};
        } else {
            std::tie(lo, hi) = d.support_bbox();
        }
        double spacing = std::max((hi.x - lo.x) / (nx - 1), (hi.y - lo.y) / std::max(1, ny - 1));
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                pts.push_back({lo.x + i * spacing, lo.y + j * spacing});
            }
        }
    }

    DirectionSearchConfig cfg;
    cfg.estimator.rng_seed = o.seed;
    std::vector<DepthResult> results(pts.size());
    parallel_for(pts.size(), [&](std::size_t k) { results[k] = tukey_depth(d, pts[k], cfg); });
    write_depth_csv(o.out_dir + "/depth.csv", pts, results);
    return 0;
}

int cmd_compare(const CommonOpts& o, const std::vector<std::string>& argv) {
    Density d = load_density(o.density_path);
    write_manifest(o, "compare", argv, load_density_json(o.density_path));
    GridSpec grid = make_grid(d, o);
    SolveReport rep = solve_2d(d, grid, make_solver_config(o));
    GridField ref = reference_field(d, grid);
    ComparisonReport cmp = compare_fields(rep.field, ref);
    write_field_csv(o.out_dir + "/field.csv", rep.field);
    write_field_csv(o.out_dir + "/residual.csv", cmp.residual);
    write_json_file(o.out_dir + "/compare.json",
                    json{{"grid", grid_spec_json(grid)},
                         {"metrics", comparison_json(cmp)},
                         {"diagnostics", solve_diagnostics_json(rep)},
                         {"seed", o.seed}});
    std::cerr << "compare: l_inf=" << cmp.l_inf << " l1_mean=" << cmp.l1_mean << "\n";
    return 0;
}

int cmd_contours(const CommonOpts& o, std::vector<double> levels,
                 const std::vector<std::string>& argv) {
    Density d = load_density(o.density_path);
    if (levels.empty()) levels = {0.1, 0.2, 0.3, 0.4};
    write_manifest(o, "contours", argv, load_density_json(o.density_path),
                   json{{"levels", levels}});
    GridSpec grid = make_grid(d, o);
    SolveReport rep = solve_2d(d, grid, make_solver_config(o));
    write_field_csv(o.out_dir + "/field.csv", rep.field);
    write_json_file(o.out_dir + "/contours.json", contours_json(extract_contours(rep.field, levels)));
    return 0;
}

int cmd_converge(const CommonOpts& o, const std::vector<double>& dx_list,
                 const std::vector<std::string>& argv) {
    Density d = load_density(o.density_path);
    write_manifest(o, "converge", argv, load_density_json(o.density_path),
                   json{{"dx_list", dx_list}});
    auto rows = convergence_table(d, dx_list, make_solver_config(o),
                                  [&](const GridSpec& s) { return reference_field(d, s); },
                                  o.margin);
    std::ostringstream out;
    out << "spacing,l_inf,ratio\n";
    for (const auto& r : rows) {
        out << format_double(r.spacing) << ',' << format_double(r.l_inf) << ','
            << format_double(r.ratio) << '\n';
    }
    write_text_file(o.out_dir + "/converge.csv", out.str());
    return 0;
}

int cmd_repro(const std::string& fig, const std::string& manifest_path, const std::string& out_dir,
              const std::vector<std::string>& argv) {
    if (!manifest_path.empty()) {
        std::ifstream in(manifest_path);
        if (!in) throw DomainError("cannot open manifest: " + manifest_path);
        json m;
        in >> m;
        std::vector<std::string> rerun = m.at("argv").get<std::vector<std::string>>();
        return run(rerun);
    }

    CommonOpts o;
    o.out_dir = out_dir;
    std::vector<double> levels = {0.1, 0.2, 0.3, 0.4};
    std::string fixtures = "fixtures/densities/";
    if (const char* env = std::getenv("DEPTH_HJB_FIXTURES")) fixtures = std::string(env) + "/";
    if (fig == "fig4") {
        o.density_path = fixtures + "square.json";
        o.dx = 1.0 / 128.0;
        o.rhs = "analytic";
    } else if (fig == "fig5") {
        o.density_path = fixtures + "triangle.json";
        o.dx = 1.0 / 128.0;
        o.rhs = "band";
        o.samples = 12000;
    } else if (fig == "fig6") {
        o.density_path = fixtures + "gaussian.json";
        o.dx = 1.0 / 128.0;
        o.rhs = "band";
        o.samples = 12000;
        o.box = {-3.0, -3.0, 3.0, 3.0};
    } else if (fig == "fig7") {
        o.density_path = fixtures + "cauchy.json";
        o.dx = 10.0 / 256.0;
        o.rhs = "band";
        o.samples = 10000;
        o.box = {-5.0, -5.0, 5.0, 5.0};
    } else {
        throw DomainError("repro: expected fig4|fig5|fig6|fig7 or --manifest");
    }

    Density d = load_density(o.density_path);
    write_manifest(o, "repro", argv, load_density_json(o.density_path),
                   json{{"figure", fig}, {"levels", levels}});
    GridSpec grid = make_grid(d, o);
    SolveReport rep = solve_2d(d, grid, make_solver_config(o));
    GridField ref = reference_field(d, grid);
    ComparisonReport cmp = compare_fields(rep.field, ref);
    write_field_csv(o.out_dir + "/field.csv", rep.field);
    write_field_csv(o.out_dir + "/residual.csv", cmp.residual);
    write_json_file(o.out_dir + "/compare.json",
                    json{{"grid", grid_spec_json(grid)},
                         {"metrics", comparison_json(cmp)},
                         {"diagnostics", solve_diagnostics_json(rep)},
                         {"seed", o.seed}});
    write_json_file(o.out_dir + "/contours.json", contours_json(extract_contours(rep.field, levels)));
    std::cerr << "repro " << fig << ": l_inf=" << cmp.l_inf << " (" << rep.runtime_ms << " ms)\n";
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"halfspace (Tukey) depth of 1D/2D densities: direction-search oracle and "
                 "Hamilton-Jacobi viscosity solves"};
    app.require_subcommand(1);

    CommonOpts solve_o, oracle_o, compare_o, contour_o, converge_o;
    std::string oracle_grid, oracle_points;
    std::vector<double> contour_levels, converge_dx;
    std::string repro_fig, repro_manifest, repro_out = "out";

    CLI::App* c_solve = app.add_subcommand("solve", "solve the depth PDE on a grid");
    add_common(c_solve, solve_o);

    CLI::App* c_oracle = app.add_subcommand("oracle", "direct direction-search depth");
    add_common(c_oracle, oracle_o, false);
    c_oracle->add_option("--grid", oracle_grid, "node counts, e.g. 33x33");
    c_oracle->add_option("--points", oracle_points, "CSV of x,y query points");

    CLI::App* c_compare = app.add_subcommand("compare", "solve and compare against the oracle");
    add_common(c_compare, compare_o);

    CLI::App* c_contours = app.add_subcommand("contours", "solve and extract level sets");
    add_common(c_contours, contour_o);
    c_contours->add_option("--levels", contour_levels, "contour levels");

    CLI::App* c_converge = app.add_subcommand("converge", "grid refinement study");
    add_common(c_converge, converge_o, false);
    c_converge->add_option("--dx", converge_dx, "spacings (two or more)")->expected(-2);

    CLI::App* c_repro = app.add_subcommand("repro", "canned reproduction runs");
    c_repro->add_option("figure", repro_fig, "fig4|fig5|fig6|fig7");
    c_repro->add_option("--manifest", repro_manifest, "re-run the argv stored in a manifest");
    c_repro->add_option("--out", repro_out, "output directory");

    std::vector<std::string> argv_copy = args;
    try {
        // CLI11 parses reversed argv vectors.
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            std::cout << app.help();
            return 0;
        }
        std::cerr << e.what() << "\n" << app.help();
        return 1;
    }

    try {
        if (c_solve->parsed()) return cmd_solve(solve_o, argv_copy);
        if (c_oracle->parsed()) return cmd_oracle(oracle_o, oracle_grid, oracle_points, argv_copy);
        if (c_compare->parsed()) return cmd_compare(compare_o, argv_copy);
        if (c_contours->parsed()) return cmd_contours(contour_o, contour_levels, argv_copy);
        if (c_converge->parsed()) return cmd_converge(converge_o, converge_dx, argv_copy);
        if (c_repro->parsed()) return cmd_repro(repro_fig, repro_manifest, repro_out, argv_copy);
    } catch (const NoConvergence& e) {
        std::cerr << "error: " << e.what()
                  << " (max update " << e.max_update_last_pass << ")\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace depth_hjb
