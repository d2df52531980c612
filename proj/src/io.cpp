#include "depth_hjb/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "depth_hjb/errors.hpp"

namespace depth_hjb {

using nlohmann::json;

Density density_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) {
        throw DomainError("density json: expected an object with a \"kind\" field");
    }
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "uniform1d") {
        return Density::uniform1d(j.at("a").get<double>(), j.at("b").get<double>());
    }
    if (kind == "uniform_convex_polygon") {
        std::vector<Vec2> verts;
        for (const auto& v : j.at("vertices")) {
            verts.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
        }
        return Density::uniform_convex_polygon(std::move(verts));
    }
    if (kind == "gaussian2d") {
        const auto& m = j.at("mean");
        const auto& c = j.at("covariance");
        std::array<std::array<double, 2>, 2> cov{
            {{c.at(0).at(0).get<double>(), c.at(0).at(1).get<double>()},
             {c.at(1).at(0).get<double>(), c.at(1).at(1).get<double>()}}};
        return Density::gaussian2d({m.at(0).get<double>(), m.at(1).get<double>()}, cov);
    }
    if (kind == "cauchy2d") {
        const auto& c = j.at("center");
        return Density::cauchy2d({c.at(0).get<double>(), c.at(1).get<double>()},
                                 j.at("gamma").get<double>());
    }
    if (kind == "valley") {
        return Density::valley(j.at("epsilon").get<double>());
    }
    throw DomainError("density json: unknown kind \"" + kind + "\"");
}

json load_density_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open density file: " + path);
    json j;
    in >> j;
    return j;
}

Density load_density(const std::string& path) { return density_from_json(load_density_json(path)); }

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

const char* state_name(NodeState s) {
    switch (s) {
        case NodeState::Boundary: return "boundary";
        case NodeState::Fixed: return "fixed";
        default: return "tentative";
    }
}

}  // namespace

void write_field_csv(const std::string& path, const GridField& field) {
    std::ostringstream out;
    out << "i,j,x,y,u,state\n";
    const GridSpec& g = field.spec;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            Vec2 p = g.node(i, j);
            out << i << ',' << j << ',' << format_double(p.x) << ',' << format_double(p.y) << ','
                << format_double(field.at(i, j)) << ',' << state_name(field.state(i, j)) << '\n';
        }
    }
    write_text_file(path, out.str());
}

json grid_spec_json(const GridSpec& spec) {
    return json{{"origin", {spec.origin.x, spec.origin.y}},
                {"spacing", spec.spacing},
                {"nx", spec.nx},
                {"ny", spec.ny},
                {"boundary_kind",
                 spec.boundary_kind == BoundaryKind::SupportHull ? "support_hull" : "truncated_box"}};
}

json solve_diagnostics_json(const SolveReport& report) {
    // runtime_ms deliberately omitted: output files must be byte-identical
    // across reruns with the same arguments and seeds.
    json violations = json::array();
    std::size_t cap = std::min<std::size_t>(report.rhs_floor_violations.size(), 100);
    for (std::size_t k = 0; k < cap; ++k) violations.push_back(report.rhs_floor_violations[k]);
    return json{{"iterations", report.iterations},
                {"max_update_last_pass", report.max_update_last_pass},
                {"rhs_floor_violation_count", report.rhs_floor_violations.size()},
                {"rhs_floor_violations", violations},
                {"dir_fixed_point_nonconverged", report.dir_fixed_point_nonconverged},
                {"monotonicity_violations", report.monotonicity_violations}};
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open output file: " + path);
    out << content;
}

void write_json_file(const std::string& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

json contours_json(const std::vector<LevelContours>& contours) {
    json levels = json::array();
    for (const LevelContours& lc : contours) {
        json polylines = json::array();
        for (const Polyline& pl : lc.polylines) {
            json pts = json::array();
            for (Vec2 p : pl.points) pts.push_back({p.x, p.y});
            polylines.push_back({{"closed", pl.closed}, {"points", pts}});
        }
        levels.push_back({{"level", lc.level}, {"empty", lc.empty}, {"polylines", polylines}});
    }
    return json{{"levels", levels}};
}

json comparison_json(const ComparisonReport& report) {
    return json{{"l_inf", report.l_inf},
                {"l1_mean", report.l1_mean},
                {"signed_max", report.signed_max}};
}

void write_depth_csv(const std::string& path, const std::vector<Vec2>& points,
                     const std::vector<DepthResult>& results) {
    if (points.size() != results.size()) throw ShapeMismatch("write_depth_csv: size mismatch");
    std::ostringstream out;
    out << "x,y,depth,n_argmin,gap\n";
    for (std::size_t k = 0; k < points.size(); ++k) {
        out << format_double(points[k].x) << ',' << format_double(points[k].y) << ','
            << format_double(results[k].depth) << ',' << results[k].argmin_dirs.size() << ','
            << format_double(results[k].gap) << '\n';
    }
    write_text_file(path, out.str());
}

std::vector<Vec2> read_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open points file: " + path);
    std::vector<Vec2> pts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string a, b;
        if (!std::getline(ls, a, ',')) continue;
        std::getline(ls, b, ',');
        char* end = nullptr;
        double x = std::strtod(a.c_str(), &end);
        if (end == a.c_str()) continue;  // header or junk line
        double y = b.empty() ? 0.0 : std::strtod(b.c_str(), nullptr);
        pts.push_back({x, y});
    }
    return pts;
}

}  // namespace depth_hjb
