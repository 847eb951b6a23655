// Command-line front end: distances, geodesics, matching, synthetic shapes
// and the built-in acceptance checks.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

#include "elastica/closed_space.hpp"
#include "elastica/interpolate.hpp"
#include "elastica/io.hpp"
#include "elastica/open_space.hpp"
#include "elastica/reparam.hpp"
#include "elastica/selftest.hpp"
#include "elastica/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace elastica;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 2;
constexpr int kExitIncomplete = 3;

void add_solver_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--a", cfg.a, "bending weight a");
    cmd->add_option("--b", cfg.b, "stretching weight b (4b^2 >= a^2)");
    cmd->add_option("--steps", cfg.steps, "time steps of the shooting solver");
    cmd->add_option("--tol-f", cfg.tol_f, "closure constraint tolerance");
    cmd->add_option("--eps-bvp", cfg.eps_bvp,
                    "relative endpoint tolerance of the log solver");
    cmd->add_option("--tol-rel", cfg.tol_rel,
                    "relative decrease threshold of the matching descent");
    cmd->add_option("--max-iter", cfg.max_iter, "log solver iteration cap");
    cmd->add_flag("--refine,!--no-refine", cfg.refine,
                  "adaptive grid refinement during matching");
    cmd->add_flag("--arclen", cfg.arclength,
                  "resample inputs proportional to arc length");
    cmd->add_option("--out", cfg.out_dir, "output directory");
    cmd->add_option("--seed", cfg.seed, "seed for randomized checks");
}

LogOptions log_options(const RunConfig& cfg) {
    LogOptions opts;
    opts.eps_rel = cfg.eps_bvp;
    opts.max_iter = cfg.max_iter;
    opts.rattle.tol_f = cfg.tol_f;
    return opts;
}

MatchOptions match_options(const RunConfig& cfg) {
    MatchOptions opts;
    opts.params = ElasticParams(cfg.a, cfg.b);
    opts.steps = cfg.steps;
    opts.tol_rel = cfg.tol_rel;
    opts.max_outer = cfg.max_outer;
    opts.refine = cfg.refine;
    opts.refine_cap = cfg.refine_cap;
    opts.log = log_options(cfg);
    return opts;
}

std::vector<DiscreteCurve> load_all(const std::vector<std::string>& paths,
                                    const RunConfig& cfg,
                                    Topology csv_topology) {
    LoadOptions lo;
    lo.arclength = cfg.arclength;
    lo.csv_topology = csv_topology;
    std::vector<DiscreteCurve> curves;
    for (const auto& p : paths) curves.push_back(load_shape(p, lo));
    if (curves.empty()) return curves;
    const Topology topo = curves.front().topology;
    Index n = 0;
    for (const auto& c : curves) {
        if (c.topology != topo)
            throw TopologyError(
                "all shapes in one run must share their topology");
        n = std::max(n, c.size());
    }
    for (auto& c : curves)
        if (c.size() != n)
            c = resample_curve(c, uniform_grid(n, c.topology));
    return curves;
}

json curve_to_json(const DiscreteCurve& c) {
    json pts = json::array();
    for (Index j = 0; j < c.size(); ++j)
        pts.push_back({c.points(0, j), c.points(1, j)});
    return pts;
}

json config_to_json(const RunConfig& cfg) {
    json j;
    j["a"] = cfg.a;
    j["b"] = cfg.b;
    j["steps"] = cfg.steps;
    j["tol_f"] = cfg.tol_f;
    j["eps_bvp"] = cfg.eps_bvp;
    j["tol_rel"] = cfg.tol_rel;
    j["max_iter"] = cfg.max_iter;
    j["refine"] = cfg.refine;
    j["arclength"] = cfg.arclength;
    j["seed"] = cfg.seed;
    return j;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    out << text;
}

std::vector<int> snapshot_indices(int steps) {
    // the classic strip: 0, 5, 10, 15, 20, 25 scaled to the step count
    std::vector<int> idx;
    for (int k = 0; k <= 5; ++k)
        idx.push_back(std::min(steps, k * steps / 5));
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return idx;
}

int cmd_dist(const RunConfig& cfg, const std::vector<std::string>& paths,
             Topology csv_topology) {
    const auto curves = load_all(paths, cfg, csv_topology);
    if (curves.size() < 2) throw Error("dist: needs at least two shapes");
    const size_t m = curves.size();
    const ElasticParams params(cfg.a, cfg.b);

    DistanceTable table;
    for (const auto& p : paths) table.names.push_back(fs::path(p).stem());
    table.distance = Eigen::MatrixXd::Zero(m, m);
    table.seconds = Eigen::MatrixXd::Zero(m, m);
    table.status.assign(m, std::vector<std::string>(m, "ok"));

    struct Job {
        size_t i, j;
    };
    std::vector<Job> jobs;
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            if (j < i && !cfg.audit_symmetry) continue;
            jobs.push_back({i, j});
        }

    auto solve_pair = [&](const Job& job) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string status = "ok";
        double dist = 0.0;
        try {
            if (curves[job.i].closed()) {
                if (cfg.match) {
                    const MatchResult res = solve_bvp_shapes(
                        curves[job.i], curves[job.j], match_options(cfg));
                    dist = res.distance_history.back();
                    if (res.incompleteness_detected)
                        status = "incomplete: " + res.diagnostic;
                } else {
                    dist = param_distance(curves[job.i], curves[job.j],
                                          params, cfg.steps,
                                          log_options(cfg))
                               .distance;
                }
            } else {
                dist = open_distance(curves[job.i], curves[job.j], params);
            }
        } catch (const Error& e) {
            status = std::string("failed: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
        return std::tuple<double, double, std::string>(dist, secs, status);
    };

    std::vector<std::future<std::tuple<double, double, std::string>>> tasks;
    tasks.reserve(jobs.size());
    for (const auto& job : jobs)
        tasks.push_back(std::async(std::launch::async, solve_pair, job));
    size_t failures = 0;
    for (size_t k = 0; k < jobs.size(); ++k) {
        auto [dist, secs, status] = tasks[k].get();
        const auto [i, j] = jobs[k];
        table.distance(i, j) = dist;
        table.seconds(i, j) = secs;
        table.status[i][j] = status;
        if (!cfg.audit_symmetry) {
            table.distance(j, i) = dist;
            table.seconds(j, i) = secs;
            table.status[j][i] = status;
        }
        if (status.rfind("failed", 0) == 0) ++failures;
    }

    fs::create_directories(cfg.out_dir);
    write_text(fs::path(cfg.out_dir) / "distances.csv", table.to_csv());
    write_text(fs::path(cfg.out_dir) / "distances.json", table.to_json());
    std::cout << table.to_csv();
    return failures == jobs.size() && !jobs.empty() ? kExitNumerical
                                                    : kExitOk;
}

int cmd_geodesic(RunConfig cfg, const std::string& path_a,
                 const std::string& path_b, Topology csv_topology) {
    const auto curves = load_all({path_a, path_b}, cfg, csv_topology);
    const ElasticParams params(cfg.a, cfg.b);
    const auto indices = snapshot_indices(cfg.steps);

    json doc;
    doc["config"] = config_to_json(cfg);
    std::vector<DiscreteCurve> snapshots;
    std::vector<std::string> labels;
    int exit_code = kExitOk;

    if (!curves[0].closed()) {
        doc["method"] = "flat";
        const OpenGeodesic g = open_geodesic(curves[0], curves[1], params);
        doc["distance"] = g.distance();
        doc["branch"] = g.branch_k;
        doc["degenerate_interior"] = g.degenerate();
        json times = json::array(), curves_json = json::array();
        for (int idx : indices) {
            const double t =
                static_cast<double>(idx) / static_cast<double>(cfg.steps);
            times.push_back(t);
            const DiscreteCurve ct = g.curve_at(t, /*validate=*/false);
            curves_json.push_back(curve_to_json(ct));
            snapshots.push_back(ct);
            labels.push_back("t=" + std::to_string(idx));
        }
        doc["times"] = times;
        doc["curves"] = curves_json;
    } else {
        ClosedGeodesic geo;
        if (cfg.match) {
            const MatchResult res =
                solve_bvp_shapes(curves[0], curves[1], match_options(cfg));
            doc["method"] = "rattle+match";
            doc["distance_history"] = res.distance_history;
            doc["incompleteness_detected"] = res.incompleteness_detected;
            if (res.incompleteness_detected) {
                doc["diagnostic"] = res.diagnostic;
                exit_code = kExitIncomplete;
            }
            json rlog = json::array();
            for (const auto& ev : res.refinement_log) {
                json e;
                e["iteration"] = ev.iteration;
                e["inserted"] = ev.inserted;
                e["removed"] = ev.removed;
                e["size_after"] = ev.size_after;
                e["cap_hit"] = ev.cap_hit;
                rlog.push_back(e);
            }
            doc["refinement_log"] = rlog;
            json psi;
            psi["grid"] = std::vector<double>(
                res.psi.grid().data(),
                res.psi.grid().data() + res.psi.grid().size());
            psi["values"] = std::vector<double>(
                res.psi.values().data(),
                res.psi.values().data() + res.psi.values().size());
            doc["psi"] = psi;
            geo = res.final_geodesic;
        } else {
            doc["method"] = "rattle";
            geo = param_distance(curves[0], curves[1], params, cfg.steps,
                                 log_options(cfg));
        }
        doc["distance"] = geo.distance;
        doc["converged"] = geo.log.converged;
        doc["residual_history"] = geo.log.residuals;
        if (geo.path.times.size() > 0) {
            json diag;
            diag["constraint_norm"] = std::vector<double>(
                geo.path.constraint_norm.data(),
                geo.path.constraint_norm.data() +
                    geo.path.constraint_norm.size());
            diag["energy"] = std::vector<double>(
                geo.path.energy.data(),
                geo.path.energy.data() + geo.path.energy.size());
            json lambda = json::array(), mu = json::array();
            for (Index i = 0; i < geo.path.lambda.cols(); ++i) {
                lambda.push_back(
                    {geo.path.lambda(0, i), geo.path.lambda(1, i)});
                mu.push_back({geo.path.mu(0, i), geo.path.mu(1, i)});
            }
            diag["lambda"] = lambda;
            diag["mu"] = mu;
            doc["diagnostics"] = diag;

            // full path: curves and momenta at every time step
            json times = json::array(), curves_json = json::array(),
                 momenta = json::array();
            for (Index i = 0; i < geo.path.times.size(); ++i) {
                times.push_back(geo.path.times[i]);
                const DiscreteCurve ct =
                    r_inverse(geo.path.state_at(i), curves[0].points.col(0),
                              nullptr, /*validate=*/false);
                curves_json.push_back(curve_to_json(ct));
                json mom = json::array();
                const Eigen::MatrixXd& pm = geo.path.momenta[i];
                for (Index j = 0; j < pm.cols(); ++j)
                    mom.push_back({pm(0, j), pm(1, j)});
                momenta.push_back(mom);
            }
            doc["times"] = times;
            doc["curves"] = curves_json;
            doc["momenta"] = momenta;
            doc["snapshots"] = indices;
            for (int idx : indices) {
                snapshots.push_back(
                    r_inverse(geo.path.state_at(idx),
                              curves[0].points.col(0), nullptr,
                              /*validate=*/false));
                labels.push_back("t=" + std::to_string(idx));
            }
        }
    }

    fs::create_directories(cfg.out_dir);
    write_text(fs::path(cfg.out_dir) / "geodesic.json", doc.dump(2) + "\n");
    if (!snapshots.empty())
        write_svg(fs::path(cfg.out_dir) / "geodesic.svg",
                  geodesic_strip_svg(snapshots, labels));
    std::cout << "distance " << doc["distance"] << ", outputs in "
              << cfg.out_dir << "\n";
    return exit_code;
}

int cmd_synth(const RunConfig& cfg, const std::string& kind,
              const SynthParams& params) {
    const ShapeFile shape = synth_shape(kind, params);
    fs::create_directories(cfg.out_dir);
    const fs::path path = fs::path(cfg.out_dir) / (shape.name + ".json");
    write_shape_file(path, shape);
    std::cout << "wrote " << path.string() << "\n";
    return kExitOk;
}

int cmd_selftest(const RunConfig& cfg) {
    SelftestOptions opts;
    opts.quick = cfg.quick;
    opts.seed = cfg.seed;
    opts.tol_f = cfg.tol_f;
    opts.eps_bvp = cfg.eps_bvp;
    opts.steps = cfg.steps;
    const auto results = run_acceptance(opts);
    int failures = 0;
    for (const auto& r : results) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << "criterion "
                  << r.id << ": " << r.name << " (" << r.seconds
                  << " s) -- " << r.details << "\n";
        if (!r.pass) ++failures;
    }
    fs::create_directories(cfg.out_dir);
    write_text(fs::path(cfg.out_dir) / "selftest.json",
               report_to_json(results) + "\n");
    return failures == 0 ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "elastica: reparameterization-invariant elastic metrics on plane "
        "curves"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::vector<std::string> shape_paths;
    std::string path_a, path_b, synth_kind;
    std::string csv_topology = "closed";
    SynthParams synth_params;

    auto* dist = app.add_subcommand(
        "dist", "pairwise geodesic distance table (CSV + JSON)");
    add_solver_options(dist, cfg);
    dist->add_option("shapes", shape_paths, "shape files (JSON or CSV)")
        ->required()
        ->expected(-2);
    dist->add_flag("--match", cfg.match,
                   "minimize over the reparameterization group");
    dist->add_flag("--audit-symmetry", cfg.audit_symmetry,
                   "solve both directions of every pair");
    dist->add_option("--topology", csv_topology,
                     "topology for CSV inputs (open|closed)");

    auto* geo = app.add_subcommand(
        "geodesic", "geodesic between two shapes (JSON + SVG strip)");
    add_solver_options(geo, cfg);
    geo->add_option("first", path_a, "first shape")->required();
    geo->add_option("second", path_b, "second shape")->required();
    geo->add_flag("--match", cfg.match,
                  "match parameterizations before the final geodesic");
    geo->add_option("--topology", csv_topology,
                    "topology for CSV inputs (open|closed)");

    auto* match = app.add_subcommand(
        "match", "optimal reparameterization between two closed shapes");
    add_solver_options(match, cfg);
    match->add_option("template", path_a, "template shape")->required();
    match->add_option("target", path_b, "target shape")->required();
    match->add_option("--topology", csv_topology,
                      "topology for CSV inputs (open|closed)");

    auto* synth = app.add_subcommand(
        "synth", "write a synthetic shape file "
                 "(circle|ellipse|ellipse_fold|star|segment|arc)");
    synth->add_option("kind", synth_kind, "shape kind")->required();
    synth->add_option("--n", synth_params.n, "number of points");
    synth->add_option("--radius", synth_params.radius, "circle/arc radius");
    synth->add_option("--rx", synth_params.rx, "ellipse x half-axis");
    synth->add_option("--ry", synth_params.ry, "ellipse y half-axis");
    synth->add_option("--depth", synth_params.depth, "fold depth");
    synth->add_option("--width", synth_params.width, "fold width");
    synth->add_option("--spikes", synth_params.spikes, "star spike count");
    synth->add_option("--amp", synth_params.amplitude, "star amplitude");
    synth->add_option("--length", synth_params.length, "segment length");
    synth->add_option("--span", synth_params.span, "arc angular span");
    synth->add_option("--out", cfg.out_dir, "output directory");

    auto* selftest = app.add_subcommand(
        "selftest", "run the built-in acceptance checks");
    add_solver_options(selftest, cfg);
    selftest->add_flag("--quick", cfg.quick,
                       "reduced sizes, subset of the heavy checks");

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.validate();
        const Topology topo =
            csv_topology == "open" ? Topology::open : Topology::closed;
        if (csv_topology != "open" && csv_topology != "closed")
            throw ParseError("--topology must be open or closed");
        if (dist->parsed()) return cmd_dist(cfg, shape_paths, topo);
        if (geo->parsed()) return cmd_geodesic(cfg, path_a, path_b, topo);
        if (match->parsed()) {
            cfg.match = true;
            return cmd_geodesic(cfg, path_a, path_b, topo);
        }
        if (synth->parsed()) return cmd_synth(cfg, synth_kind, synth_params);
        if (selftest->parsed()) return cmd_selftest(cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
