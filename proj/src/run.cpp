#include "trapbose/run.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Core>

#include "trapbose/format.hpp"
#include "trapbose/greens.hpp"
#include "trapbose/interaction.hpp"
#include "trapbose/secular.hpp"
#include "trapbose/wavefunction.hpp"

namespace trapbose {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

TrapModel make_trap(const RunConfig& cfg) {
    return cfg.trap.oscillator_units ? TrapModel::oscillator_units()
                                     : TrapModel(cfg.trap.mass, cfg.trap.frequency);
}

int resolved_order(const BasisConfig& b, int size) {
    return b.order > 0 ? b.order : size + RadialBasis::default_margin;
}

ordered_json versions_json() {
    return {{"trapbose", kVersion},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                          std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)}};
}

void write_file(const fs::path& p, const std::string& body) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw SolverError("cannot write output file: " + p.string());
    os << body;
}

struct LevelReport {
    SpectralSolution sol;
    double fixed_point = 0.0;
    std::optional<int> nodes;
    std::optional<double> norm_defect;
};

ordered_json level_json(int index, const LevelReport& lr, double hw) {
    const SpectralSolution& s = lr.sol;
    ordered_json j{{"index", index},
                   {"n1", s.n1},
                   {"l", s.l},
                   {"E_over_hw", s.energy / hw},
                   {"shift_over_hw", (s.energy - s.unperturbed_energy) / hw},
                   {"det_residual", s.det_residual},
                   {"oracle_gap", s.oracle_gap},
                   {"eq24_gap", s.eq24_gap},
                   {"eigen_residual", s.eigen_residual},
                   {"fixed_point_residual", lr.fixed_point},
                   {"degenerate_cluster", s.degenerate_cluster}};
    if (lr.nodes) j["nodes"] = *lr.nodes;
    if (lr.norm_defect) j["normalization_defect"] = *lr.norm_defect;
    return j;
}

ordered_json interaction_json(const InteractionMatrix& v) {
    return {{"quadrature_order", v.quadrature_order},
            {"refinement_delta", v.refinement_delta},
            {"quadrature_adequate", v.quadrature_adequate}};
}

// ---- minimal static SVG line chart ----------------------------------------

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string svg_line_chart(const std::string& x_label, const std::string& y_label,
                           const std::vector<double>& xs,
                           const std::vector<std::vector<double>>& series) {
    const double w = 640, h = 420, ml = 70, mr = 20, mt = 20, mb = 50;
    double xmin = xs.front(), xmax = xs.back();
    if (xmin > xmax) std::swap(xmin, xmax);
    double ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (size_t i = 0; i < s.size(); ++i)
            if (std::isfinite(s[i])) {
                ymin = std::min(ymin, s[i]);
                ymax = std::max(ymax, s[i]);
            }
    if (ymin > ymax) { ymin = 0.0; ymax = 1.0; }
    if (xmax == xmin) { xmax = xmin + 1.0; }
    if (ymax == ymin) { ymax = ymin + 1.0; }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
    auto Y = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    os << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
    os << "<line x1=\"" << px(ml) << "\" y1=\"" << px(h - mb) << "\" x2=\"" << px(w - mr)
       << "\" y2=\"" << px(h - mb) << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << px(ml) << "\" y1=\"" << px(mt) << "\" x2=\"" << px(ml)
       << "\" y2=\"" << px(h - mb) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << px((ml + w - mr) / 2) << "\" y=\"" << px(h - 12)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << x_label
       << "</text>\n";
    os << "<text x=\"16\" y=\"" << px((mt + h - mb) / 2)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" transform=\"rotate(-90 16 "
       << px((mt + h - mb) / 2) << ")\">" << y_label << "</text>\n";
    for (int t = 0; t <= 4; ++t) {
        const double xv = xmin + (xmax - xmin) * t / 4;
        const double yv = ymin + (ymax - ymin) * t / 4;
        os << "<text x=\"" << px(X(xv)) << "\" y=\"" << px(h - mb + 18)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt17(xv).substr(0, 8)
           << "</text>\n";
        os << "<text x=\"" << px(ml - 6) << "\" y=\"" << px(Y(yv) + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt17(yv).substr(0, 8)
           << "</text>\n";
    }
    for (size_t k = 0; k < series.size(); ++k) {
        std::ostringstream pts;
        bool any = false;
        for (size_t i = 0; i < xs.size(); ++i) {
            if (!std::isfinite(series[k][i])) continue;
            if (any) pts << ' ';
            pts << px(X(xs[i])) << ',' << px(Y(series[k][i]));
            any = true;
        }
        if (!any) continue;
        os << "<polyline fill=\"none\" stroke=\"" << palette[k % 8]
           << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
        for (size_t i = 0; i < xs.size(); ++i) {
            if (!std::isfinite(series[k][i])) continue;
            os << "<circle cx=\"" << px(X(xs[i])) << "\" cy=\"" << px(Y(series[k][i]))
               << "\" r=\"2.5\" fill=\"" << palette[k % 8] << "\"/>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

// ---- solve ----------------------------------------------------------------

int cmd_solve(const RunConfig& cfg, const fs::path& out) {
    const TrapModel trap = make_trap(cfg);
    const int order = resolved_order(cfg.basis, cfg.basis.size);
    const RadialBasis basis(trap, cfg.basis.l, cfg.basis.size, order);
    const InteractionMatrix v = matrix_elements(basis, cfg.potential);
    if (!v.quadrature_adequate)
        std::cerr << "warning: interaction quadrature not converged (delta "
                  << fmt17(v.refinement_delta) << "); raise [basis] order\n";
    const auto sols = find_levels(assemble(basis, v), cfg.solve.levels);
    const double hw = trap.energy_quantum();

    std::vector<LevelReport> reports;
    std::vector<RadialFunction> funcs;
    for (size_t k = 0; k < sols.size(); ++k) {
        LevelReport lr;
        lr.sol = sols[k];
        lr.fixed_point = fixed_point_residual(sols[k], basis, v);
        if (static_cast<int>(k) < cfg.solve.wavefunctions) {
            const auto grid = uniform_grid(cfg.solve.grid_points,
                                           cfg.solve.grid_rmax * trap.length_scale());
            funcs.push_back(reconstruct(sols[k], basis, grid));
            lr.nodes = count_nodes(funcs.back());
            lr.norm_defect = normalization_defect(funcs.back());
        }
        reports.push_back(std::move(lr));
    }

    fs::create_directories(out);
    if (cfg.wants("csv")) {
        std::ostringstream csv;
        csv << "index,n1_label,l,E_over_hw,shift_over_hw,det_residual,oracle_gap,eq24_gap\n";
        for (size_t k = 0; k < sols.size(); ++k) {
            const auto& s = sols[k];
            csv << k << ',' << s.n1 << ',' << s.l << ',' << fmt17(s.energy / hw) << ','
                << fmt17((s.energy - s.unperturbed_energy) / hw) << ','
                << fmt17(s.det_residual) << ',' << fmt17(s.oracle_gap) << ','
                << fmt17(s.eq24_gap) << '\n';
        }
        write_file(out / "levels.csv", csv.str());
        for (size_t k = 0; k < funcs.size(); ++k) {
            std::ostringstream wf;
            export_csv(funcs[k], wf);
            write_file(out / ("wavefunction_" + std::to_string(k) + ".csv"), wf.str());
        }
    }
    if (cfg.wants("json")) {
        ordered_json j;
        j["command"] = "solve";
        j["config"] = config_to_json(cfg);
        j["derived"] = {{"energy_quantum", hw},
                        {"length_scale", trap.length_scale()},
                        {"gaussian_width", trap.gaussian_width()},
                        {"basis_order", order}};
        j["interaction"] = interaction_json(v);
        j["levels"] = ordered_json::array();
        for (size_t k = 0; k < reports.size(); ++k)
            j["levels"].push_back(level_json(static_cast<int>(k), reports[k], hw));
        j["versions"] = versions_json();
        write_file(out / "run.json", j.dump(2) + "\n");
    }

    for (size_t k = 0; k < sols.size(); ++k)
        std::cout << "level " << k << ": E = " << fmt17(sols[k].energy / hw)
                  << " hw  (n1=" << sols[k].n1 << ", shift "
                  << fmt17((sols[k].energy - sols[k].unperturbed_energy) / hw) << ")\n";
    return 0;
}

// ---- sweep ----------------------------------------------------------------

struct SweepPoint {
    double value = 0.0;
    bool ok = false;
    std::string error;
    std::vector<double> e_over_hw;
    std::vector<double> shift_over_hw;
    std::vector<int> n1;
};

SweepPoint sweep_one(const RunConfig& cfg, const std::string& var, double value) {
    SweepPoint pt;
    pt.value = value;
    try {
        RunConfig local = cfg;
        int size = cfg.basis.size;
        if (var == "g") local.potential.strength = value;
        else if (var == "sigma") local.potential.range = value;
        else if (var == "V0") local.potential.depth = value;
        else if (var == "a") local.potential.radius = value;
        else size = static_cast<int>(value);

        const TrapModel trap = make_trap(local);
        const RadialBasis basis(trap, local.basis.l, size, resolved_order(local.basis, size));
        const InteractionMatrix v = matrix_elements(basis, local.potential);
        const auto sols = find_levels(assemble(basis, v), local.sweep.levels);
        const double hw = trap.energy_quantum();
        for (const auto& s : sols) {
            pt.e_over_hw.push_back(s.energy / hw);
            pt.shift_over_hw.push_back((s.energy - s.unperturbed_energy) / hw);
            pt.n1.push_back(s.n1);
        }
        pt.ok = true;
    } catch (const std::exception& e) {
        pt.error = e.what();
    }
    return pt;
}

int cmd_sweep(const RunConfig& cfg, const fs::path& out, int jobs) {
    const std::string& var = cfg.sweep.variable;
    const auto& values = cfg.sweep.values;
    std::vector<SweepPoint> points(values.size());

    if (jobs <= 1) {
        for (size_t i = 0; i < values.size(); ++i) points[i] = sweep_one(cfg, var, values[i]);
    } else {
        for (size_t base = 0; base < values.size(); base += static_cast<size_t>(jobs)) {
            const size_t stop = std::min(values.size(), base + static_cast<size_t>(jobs));
            std::vector<std::future<SweepPoint>> batch;
            for (size_t i = base; i < stop; ++i)
                batch.push_back(std::async(std::launch::async, sweep_one, std::cref(cfg),
                                           std::cref(var), values[i]));
            for (size_t i = base; i < stop; ++i) points[i] = batch[i - base].get();
        }
    }

    size_t n_ok = 0;
    for (const auto& p : points)
        if (p.ok) ++n_ok;

    fs::create_directories(out);
    const int levels = cfg.sweep.levels;
    if (cfg.wants("csv")) {
        std::ostringstream csv;
        csv << "value,status";
        for (int k = 0; k < levels; ++k)
            csv << ",E" << k << "_over_hw,shift" << k << "_over_hw";
        csv << '\n';
        for (const auto& p : points) {
            csv << fmt17(p.value) << ',' << (p.ok ? "ok" : "error");
            for (int k = 0; k < levels; ++k) {
                if (p.ok) csv << ',' << fmt17(p.e_over_hw[k]) << ',' << fmt17(p.shift_over_hw[k]);
                else csv << ",,";
            }
            csv << '\n';
        }
        write_file(out / "sweep.csv", csv.str());
    }
    if (cfg.wants("svg")) {
        std::vector<std::vector<double>> series(levels);
        for (int k = 0; k < levels; ++k)
            for (const auto& p : points)
                series[k].push_back(p.ok ? p.e_over_hw[k]
                                         : std::numeric_limits<double>::quiet_NaN());
        write_file(out / "sweep.svg", svg_line_chart(var, "E / hw", values, series));
    }
    if (cfg.wants("json")) {
        ordered_json j;
        j["command"] = "sweep";
        j["config"] = config_to_json(cfg);
        j["points"] = ordered_json::array();
        for (const auto& p : points) {
            ordered_json pj{{"value", p.value}, {"status", p.ok ? "ok" : "error"}};
            if (!p.ok) pj["error"] = p.error;
            else {
                pj["E_over_hw"] = p.e_over_hw;
                pj["shift_over_hw"] = p.shift_over_hw;
                pj["n1"] = p.n1;
            }
            j["points"].push_back(pj);
        }
        j["versions"] = versions_json();
        write_file(out / "run.json", j.dump(2) + "\n");
    }

    std::cout << "sweep " << var << ": " << n_ok << "/" << points.size() << " points solved\n";
    if (n_ok == 0) {
        std::cerr << "error: every sweep point failed";
        if (!points.empty()) std::cerr << " (first: " << points.front().error << ")";
        std::cerr << '\n';
        return 3;
    }
    return 0;
}

// ---- converge -------------------------------------------------------------

int cmd_converge(const RunConfig& cfg, const fs::path& out) {
    const TrapModel trap = make_trap(cfg);
    const int max_n = cfg.converge.ladder.back();
    BasisFactory factory;
    if (cfg.basis.order > 0) {
        const TrapModel t = trap;
        const int l = cfg.basis.l, order = cfg.basis.order;
        factory = [t, l, order](int n) { return RadialBasis(t, l, n, order); };
    } else {
        factory = shared_rule_factory(trap, cfg.basis.l, max_n);
    }
    const ConvergenceTable table =
        convergence_sweep(factory, cfg.potential, cfg.converge.ladder, cfg.converge.levels,
                          cfg.converge.epsilon);
    const double hw = trap.energy_quantum();
    const int rungs = static_cast<int>(table.sizes.size());
    const int levels = cfg.converge.levels;

    fs::create_directories(out);
    if (cfg.wants("csv")) {
        std::ostringstream csv;
        csv << "N";
        for (int k = 0; k < levels; ++k) csv << ",E" << k << "_over_hw,delta" << k;
        csv << '\n';
        for (int r = 0; r < rungs; ++r) {
            csv << table.sizes[r];
            for (int k = 0; k < levels; ++k) {
                csv << ',' << fmt17(table.energies(r, k) / hw) << ',';
                if (r > 0) csv << fmt17(table.deltas(r, k) / hw);
            }
            csv << '\n';
        }
        write_file(out / "converge.csv", csv.str());
    }
    if (cfg.wants("svg")) {
        std::vector<double> xs(table.sizes.begin(), table.sizes.end());
        std::vector<std::vector<double>> series(levels);
        for (int k = 0; k < levels; ++k)
            for (int r = 0; r < rungs; ++r) series[k].push_back(table.energies(r, k) / hw);
        write_file(out / "converge.svg", svg_line_chart("N", "E / hw", xs, series));
    }
    if (cfg.wants("json")) {
        ordered_json j;
        j["command"] = "converge";
        j["config"] = config_to_json(cfg);
        j["ladder"] = table.sizes;
        j["epsilon"] = table.epsilon;
        j["energies_over_hw"] = ordered_json::array();
        j["deltas_over_hw"] = ordered_json::array();
        for (int r = 0; r < rungs; ++r) {
            ordered_json erow = ordered_json::array(), drow = ordered_json::array();
            for (int k = 0; k < levels; ++k) {
                erow.push_back(table.energies(r, k) / hw);
                if (r == 0) drow.push_back(nullptr);
                else drow.push_back(table.deltas(r, k) / hw);
            }
            j["energies_over_hw"].push_back(erow);
            j["deltas_over_hw"].push_back(drow);
        }
        j["converged"] = table.converged;
        j["versions"] = versions_json();
        write_file(out / "run.json", j.dump(2) + "\n");
    }

    for (int k = 0; k < levels; ++k)
        std::cout << "level " << k << ": "
                  << (table.converged[k] ? "converged" : "not converged") << " at epsilon "
                  << fmt17(table.epsilon) << " hw\n";
    return 0;
}

} // namespace

int run_command(Command cmd, const fs::path& config_path,
                const std::optional<std::string>& out_override, int jobs) {
    RunConfig cfg;
    try {
        cfg = load_config(config_path);
        if (out_override) cfg.output.directory = *out_override;
        validate(cfg, cmd);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }

    const fs::path out = cfg.output.directory;
    try {
        switch (cmd) {
            case Command::solve: return cmd_solve(cfg, out);
            case Command::sweep: return cmd_sweep(cfg, out, std::max(1, jobs));
            case Command::converge: return cmd_converge(cfg, out);
        }
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        try {
            fs::create_directories(out);
            ordered_json j{{"command", command_name(cmd)},
                           {"error", e.what()},
                           {"config", config_to_json(cfg)}};
            std::ofstream os(out / "diagnostics.json", std::ios::binary);
            os << j.dump(2) << '\n';
        } catch (...) {
            // diagnostics are best-effort
        }
        return 3;
    }
}

} // namespace trapbose
