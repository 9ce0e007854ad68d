#include "modalrepair/cli.hpp"

#include "modalrepair/error_analysis.hpp"
#include "modalrepair/errors.hpp"
#include "modalrepair/gappy.hpp"
#include "modalrepair/log.hpp"
#include "modalrepair/mft.hpp"
#include "modalrepair/superres.hpp"
#include "modalrepair/synthetic.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

namespace modalrepair {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", 100.0 * fraction);
    return buf;
}

void write_json(const fs::path& path, const json& j) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os << j.dump(2) << '\n';
}

void write_tensor(const fs::path& path, const Tensor& t) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    mft::write(path, t);
}

Tensor read_complete(const std::string& path, const char* role) {
    Tensor t = mft::read(path);
    if (!t.all_finite()) throw ArgumentError(std::string(role) + " " + path + " contains gaps");
    return t;
}

// Flags shared by every command that iterates a truncated factorization.
struct SolverFlags {
    std::vector<std::size_t> modes;
    std::optional<double> threshold;
    double tol = 1e-6;
    std::size_t max_iter = 500;
    std::string init = "interp";
    std::string scheme = "triangulated";
    std::string metric = "printed";

    // The matrix command brings its own --modes and --init lists.
    void attach(CLI::App& app, bool single_run = true) {
        if (single_run) {
            app.add_option("--modes", modes, "retained rank; one value, or one per tensor mode")->delimiter(',');
            app.add_option("--threshold", threshold, "relative singular value cut-off in (0, 1)");
            app.add_option("--init", init, "initial fill")
                ->check(CLI::IsMember({"zeros", "mean", "interp", "linear-interp"}))
                ->capture_default_str();
        }
        app.add_option("--tol", tol, "convergence tolerance")->capture_default_str();
        app.add_option("--max-iter", max_iter, "iteration budget")->capture_default_str();
        app.add_option("--scheme", scheme, "interpolation scheme")
            ->check(CLI::IsMember({"triangulated", "separable"}))
            ->capture_default_str();
        app.add_option("--metric", metric, "convergence metric")
            ->check(CLI::IsMember({"printed", "rmse"}))
            ->capture_default_str();
    }

    std::vector<RankRule> rules() const {
        if (threshold && !modes.empty()) throw ArgumentError("--modes and --threshold are mutually exclusive");
        if (threshold) return {RankRule::threshold(*threshold)};
        if (modes.empty()) return {RankRule::fixed(5)};
        std::vector<RankRule> out;
        for (auto n : modes) out.push_back(RankRule::fixed(n));
        return out;
    }

    void apply(IterationConfig& cfg) const {
        cfg.rank_rules = rules();
        cfg.tolerance = tol;
        cfg.max_iterations = max_iter;
        cfg.metric = parse_convergence_metric(metric);
        cfg.validate();
    }
};

json iteration_json(const IterationConfig& cfg) {
    json rules = json::array();
    for (const auto& r : cfg.rank_rules) rules.push_back(r.describe());
    return {{"rank_rules", rules},
            {"tolerance", cfg.tolerance},
            {"max_iterations", cfg.max_iterations},
            {"metric", to_string(cfg.metric)}};
}

json gappy_json(const GappyConfig& cfg) {
    json j = iteration_json(cfg);
    j["init"] = to_string(cfg.init_strategy);
    j["scheme"] = to_string(cfg.scheme);
    return j;
}

json superres_json(const SuperresConfig& cfg) {
    json j = iteration_json(cfg);
    j["init"] = to_string(cfg.init_strategy);
    j["scheme"] = to_string(cfg.scheme);
    j["target_dims"] = cfg.target_dims;
    if (!cfg.strides.empty()) j["strides"] = cfg.strides;
    j["enhance_time"] = cfg.enhance_time;
    return j;
}

json result_json(const RepairResult& r) {
    return {{"iterations", r.iterations},
            {"converged", r.converged},
            {"ranks", r.ranks},
            {"trace", r.trace},
            {"initial_fill",
             {{"interpolated", r.fill.interpolated},
              {"mean_fallback", r.fill.mean_fallback},
              {"degenerate_fields", r.fill.degenerate_fields}}}};
}

void add_rrmse(json& j, const char* key, double value) {
    j[key] = value;
    j[std::string(key) + "_percent"] = percent(value);
}

// ---- generate ------------------------------------------------------------

struct GenerateArgs {
    std::string spec;
    std::string out;
    std::optional<std::uint64_t> seed;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
    std::ifstream is(a.spec);
    if (!is) throw IoError("cannot open spec " + a.spec);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw ArgumentError("invalid spec " + a.spec + ": " + e.what());
    }
    auto spec = synthetic::spec_from_json(j);
    if (a.seed) spec.seed = *a.seed;
    const Tensor t = synthetic::generate(spec);
    write_tensor(a.out, t);
    fs::path spec_out = a.out;
    spec_out.replace_extension(".spec.json");
    write_json(spec_out, synthetic::to_json(spec));
    out << "wrote " << a.out << " (" << t.size() << " values)\n";
    return kExitOk;
}

// ---- inject-gaps / downsample -------------------------------------------

struct InjectArgs {
    std::string input;
    std::string out;
    double fraction = 0.0;
    std::uint64_t seed = 0;
};

int cmd_inject(const InjectArgs& a, std::ostream& out) {
    const auto g = inject_gaps(read_complete(a.input, "input"), a.fraction, a.seed);
    write_tensor(a.out, g.data);
    out << "wrote " << a.out << " (" << g.mask.count() << " gaps)\n";
    return kExitOk;
}

struct DownsampleArgs {
    std::string input;
    std::string out;
    std::vector<std::size_t> factors;
};

std::vector<std::size_t> per_axis(const std::vector<std::size_t>& v, std::size_t axes, const char* what) {
    if (v.size() == 1) return std::vector<std::size_t>(axes, v[0]);
    if (v.size() != axes)
        throw ArgumentError(std::string(what) + " needs 1 or " + std::to_string(axes) + " values, got " +
                            std::to_string(v.size()));
    return v;
}

int cmd_downsample(const DownsampleArgs& a, std::ostream& out) {
    const Tensor t = mft::read(a.input);
    require_snapshot_tensor(t);
    const auto factors = per_axis(a.factors, t.spatial_dims().size(), "--factors");
    const auto d = downsample(t, factors);
    write_tensor(a.out, d.data);
    out << "wrote " << a.out << "\n";
    return kExitOk;
}

// ---- repair --------------------------------------------------------------

struct RepairArgs {
    std::string input;
    std::string out;
    std::string report;
    std::string truth;
    std::optional<double> fraction;
    std::uint64_t seed = 0;
    SolverFlags solver;
};

int cmd_repair(const RepairArgs& a, std::ostream& out) {
    GappyConfig cfg;
    a.solver.apply(cfg);
    cfg.init_strategy = parse_fill_strategy(a.solver.init);
    cfg.scheme = parse_interpolation_scheme(a.solver.scheme);

    std::optional<Tensor> truth;
    GappyData gappy;
    if (a.fraction) {
        truth = read_complete(a.input, "input");
        gappy = inject_gaps(*truth, *a.fraction, a.seed);
    } else {
        gappy.data = mft::read(a.input);
        gappy.mask = GapMask::from_nan(gappy.data);
        if (!a.truth.empty()) truth = read_complete(a.truth, "truth");
    }

    const auto r = gappy_repair(gappy.data, gappy.mask, cfg);
    if (!a.out.empty()) write_tensor(a.out, r.repaired);

    json report = {{"command", "repair"}, {"input", a.input}, {"config", gappy_json(cfg)}};
    if (a.fraction) {
        report["config"]["fraction"] = *a.fraction;
        report["config"]["seed"] = a.seed;
    }
    if (!a.truth.empty()) report["truth"] = a.truth;
    report["gaps"] = gappy.mask.count();
    report["result"] = result_json(r);
    if (truth) add_rrmse(report, "rrmse", rrmse(*truth, r.repaired));
    if (!a.report.empty()) write_json(a.report, report);

    out << "repair: " << r.iterations << " iterations, " << (r.converged ? "converged" : "not converged");
    if (truth) out << ", rrmse " << report["rrmse_percent"].get<std::string>() << "%";
    out << "\n";
    return kExitOk;
}

// ---- enhance -------------------------------------------------------------

struct EnhanceArgs {
    std::string input;
    std::string out;
    std::string report;
    std::string truth;
    std::vector<std::size_t> target;
    std::vector<std::size_t> strides;
    bool enhance_time = false;
    SolverFlags solver;
};

int cmd_enhance(const EnhanceArgs& a, std::ostream& out) {
    const Tensor coarse = mft::read(a.input);
    require_snapshot_tensor(coarse);
    SuperresConfig cfg;
    a.solver.apply(cfg);
    cfg.init_strategy = parse_fill_strategy(a.solver.init);
    cfg.scheme = parse_interpolation_scheme(a.solver.scheme);
    cfg.target_dims = a.target;
    if (!a.strides.empty()) cfg.strides = per_axis(a.strides, coarse.spatial_dims().size(), "--strides");
    cfg.enhance_time = a.enhance_time;

    const auto r = superresolve(coarse, cfg);
    if (!a.out.empty()) write_tensor(a.out, r.repaired);

    json report = {{"command", "enhance"}, {"input", a.input}, {"config", superres_json(cfg)}};
    report["result"] = result_json(r);
    if (!a.truth.empty()) {
        report["truth"] = a.truth;
        const Tensor truth = read_complete(a.truth, "truth");
        require_same_shape(truth.dims(), r.repaired.dims(), "enhance truth");
        const auto base = place_on_target(coarse, cfg);
        const Tensor baseline = interpolate_initial(base.data, base.mask, cfg.scheme);
        add_rrmse(report, "rrmse", rrmse(truth, r.repaired));
        add_rrmse(report, "interpolation_rrmse", rrmse(truth, baseline));
    }
    if (!a.report.empty()) write_json(a.report, report);

    out << "enhance: " << r.iterations << " iterations";
    if (report.contains("rrmse"))
        out << ", rrmse " << report["rrmse_percent"].get<std::string>() << "% (interpolation "
            << report["interpolation_rrmse_percent"].get<std::string>() << "%)";
    out << "\n";
    return kExitOk;
}

// ---- analyze -------------------------------------------------------------

struct AnalyzeArgs {
    std::string input;
    std::string truth;
    std::string out;
    std::size_t bins = 101;
    bool smooth = false;
    bool per_snapshot = false;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
    const Tensor truth = read_complete(a.truth, "truth");
    const Tensor recon = read_complete(a.input, "reconstruction");
    AnalysisOptions opts;
    opts.pdf.bins = a.bins;
    opts.pdf.smooth = a.smooth;
    opts.per_snapshot_pdf = a.per_snapshot;
    const auto rep = analyze(truth, recon, opts);

    const fs::path dir = a.out;
    fs::create_directories(dir);
    json j = to_json(rep);
    j["command"] = "analyze";
    j["input"] = a.input;
    j["truth"] = a.truth;
    j["config"] = {{"bins", a.bins}, {"smooth", a.smooth}, {"per_snapshot", a.per_snapshot}};
    write_json(dir / "report.json", j);
    write_pdf_csv(dir / "pdf.csv", rep.pdf);
    for (std::size_t c = 0; c < rep.component_error.size(); ++c) {
        const auto& w = rep.worst[c];
        const auto slice = absolute_error_slice(rep.component_error[c], w.snapshot, w.plane.value_or(0));
        const std::string stem = "worst_c" + std::to_string(c);
        write_pgm16(dir / (stem + ".pgm"), slice);
        write_matrix_csv(dir / (stem + ".csv"), slice);
        if (a.per_snapshot) write_pdf_csv(dir / ("pdf_snapshots_c" + std::to_string(c) + ".csv"), rep.pdf_per_snapshot[c]);
    }
    out << "analyze: rrmse " << percent(rep.rrmse) << "%\n";
    return kExitOk;
}

// ---- matrix --------------------------------------------------------------

struct MatrixArgs {
    std::string input;
    std::string spec;
    std::string out;
    std::vector<double> fractions{0.2, 0.4, 0.6};
    std::vector<std::size_t> resolutions{2, 4, 8, 16};
    std::vector<std::size_t> modes{5, 10, 15};
    std::vector<std::string> inits{"interp", "zeros"};
    std::string kind = "both";
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    SolverFlags solver;
};

struct Cell {
    std::string name;
    std::function<json()> run;
    json result;
    bool failed = false;
};

void run_cells(std::vector<Cell>& cells, std::size_t jobs) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                cells[i].result = cells[i].run();
            } catch (const NumericalError& e) {
                logger().error("cell {}: {}", cells[i].name, e.what());
                cells[i].result = {{"error", e.what()}};
                cells[i].failed = true;
            }
        }
    };
    const std::size_t n = std::max<std::size_t>(1, std::min(jobs, cells.size()));
    std::vector<std::future<void>> pool;
    for (std::size_t w = 0; w < n; ++w) pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool) f.get();  // rethrows usage errors from any cell
}

std::string cell_value(const json& r, const char* key) {
    if (!r.contains(key)) return "nan";
    return r[key].get<std::string>();
}

std::string fraction_label(double f) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", f);
    return buf;
}

int cmd_matrix(const MatrixArgs& a, std::ostream& out) {
    if (a.input.empty() == a.spec.empty()) throw ArgumentError("matrix needs exactly one of --input or --spec");
    if (a.modes.empty() || a.inits.empty()) throw ArgumentError("--modes and --init lists must be non-empty");
    const bool do_gappy = a.kind != "superres", do_superres = a.kind != "gappy";
    if (do_gappy && a.fractions.empty()) throw ArgumentError("--fractions must be non-empty");
    if (do_superres && a.resolutions.empty()) throw ArgumentError("--resolutions must be non-empty");

    Tensor truth;
    json source;
    if (!a.spec.empty()) {
        std::ifstream is(a.spec);
        if (!is) throw IoError("cannot open spec " + a.spec);
        json j;
        try {
            j = json::parse(is);
        } catch (const json::parse_error& e) {
            throw ArgumentError("invalid spec " + a.spec + ": " + e.what());
        }
        const auto spec = synthetic::spec_from_json(j);
        truth = synthetic::generate(spec);
        source = {{"spec", synthetic::to_json(spec)}};
    } else {
        truth = read_complete(a.input, "input");
        source = {{"input", a.input}};
    }
    require_snapshot_tensor(truth);
    std::vector<FillStrategy> inits;
    for (const auto& s : a.inits) inits.push_back(parse_fill_strategy(s));

    IterationConfig base;
    a.solver.apply(base);
    const auto scheme = parse_interpolation_scheme(a.solver.scheme);
    const fs::path dir = a.out;
    fs::create_directories(dir / "cells");

    std::vector<Cell> cells;
    if (do_gappy)
        for (double f : a.fractions)
            for (auto n : a.modes)
                for (auto init : inits) {
                    GappyConfig cfg;
                    static_cast<IterationConfig&>(cfg) = base;
                    cfg.rank_rules = {RankRule::fixed(n)};
                    cfg.init_strategy = init;
                    cfg.scheme = scheme;
                    const std::string name =
                        "gappy_f" + fraction_label(f) + "_n" + std::to_string(n) + "_" + to_string(init);
                    cells.push_back({name, {}, {}, false});
                    cells.back().run = [&truth, cfg, f, seed = a.seed, path = dir / "cells" / (name + ".json")] {
                                         const auto g = inject_gaps(truth, f, seed);
                                         const auto r = gappy_repair(g.data, g.mask, cfg);
                                         json j = {{"fraction", f}, {"seed", seed}, {"config", gappy_json(cfg)}};
                                         j["result"] = result_json(r);
                                         add_rrmse(j, "rrmse", rrmse(truth, r.repaired));
                                         write_json(path, j);
                                         return j;
                                     };
                }
    if (do_superres) {
        const Shape spatial = truth.spatial_dims();
        for (auto factor : a.resolutions) {
            const std::vector<std::size_t> factors(spatial.size(), factor);
            for (auto n : a.modes)
                for (auto init : inits) {
                    SuperresConfig cfg;
                    static_cast<IterationConfig&>(cfg) = base;
                    cfg.rank_rules = {RankRule::fixed(n)};
                    cfg.init_strategy = init;
                    cfg.scheme = scheme;
                    cfg.target_dims = spatial;
                    cfg.strides = factors;
                    const std::string name =
                        "superres_r" + std::to_string(factor) + "_n" + std::to_string(n) + "_" + to_string(init);
                    cells.push_back({name, {}, {}, false});
                    cells.back().run = [&truth, cfg, factors, path = dir / "cells" / (name + ".json")] {
                                         const auto d = downsample(truth, factors);
                                         const auto r = superresolve(d.data, cfg);
                                         const auto placed = place_on_target(d.data, cfg);
                                         const Tensor baseline = interpolate_initial(placed.data, placed.mask, cfg.scheme);
                                         json j = {{"factor", factors.front()}, {"config", superres_json(cfg)}};
                                         j["result"] = result_json(r);
                                         add_rrmse(j, "rrmse", rrmse(truth, r.repaired));
                                         add_rrmse(j, "interpolation_rrmse", rrmse(truth, baseline));
                                         write_json(path, j);
                                         return j;
                                     };
                }
        }
    }
    run_cells(cells, a.jobs);

    bool any_failed = false;
    std::size_t idx = 0;
    auto header = [&](std::ostream& os, const char* first, bool baseline) {
        os << first << ",modes";
        if (baseline) os << ",interpolation_rrmse_pct";
        for (auto init : inits) os << "," << to_string(init) << "_rrmse_pct," << to_string(init) << "_iterations";
        os << "\n";
    };
    auto row_cells = [&](std::ostream& os) {
        for (std::size_t i = 0; i < inits.size(); ++i, ++idx) {
            const auto& c = cells[idx];
            any_failed = any_failed || c.failed;
            os << "," << cell_value(c.result, "rrmse_percent") << ","
               << (c.failed ? std::string("nan") : std::to_string(c.result["result"]["iterations"].get<std::size_t>()));
        }
        os << "\n";
    };
    if (do_gappy) {
        std::ofstream os(dir / "gappy.csv", std::ios::trunc);
        if (!os) throw IoError("cannot write " + (dir / "gappy.csv").string());
        header(os, "fraction", false);
        for (double f : a.fractions)
            for (auto n : a.modes) {
                os << fraction_label(f) << "," << n;
                row_cells(os);
            }
    }
    if (do_superres) {
        std::ofstream os(dir / "superres.csv", std::ios::trunc);
        if (!os) throw IoError("cannot write " + (dir / "superres.csv").string());
        header(os, "factor", true);
        for (auto factor : a.resolutions)
            for (auto n : a.modes) {
                std::string baseline = "nan";
                for (std::size_t i = 0; i < inits.size(); ++i)
                    if (!cells[idx + i].failed) baseline = cell_value(cells[idx + i].result, "interpolation_rrmse_percent");
                os << factor << "," << n << "," << baseline;
                row_cells(os);
            }
    }

    json summary = {{"command", "matrix"},
                    {"source", source},
                    {"config",
                     {{"solver", iteration_json(base)},
                      {"scheme", to_string(scheme)},
                      {"fractions", a.fractions},
                      {"resolutions", a.resolutions},
                      {"modes", a.modes},
                      {"init", a.inits},
                      {"kind", a.kind},
                      {"seed", a.seed}}}};
    json names = json::array();
    for (const auto& c : cells) names.push_back(c.name);
    summary["cells"] = names;
    write_json(dir / "matrix.json", summary);
    out << "matrix: " << cells.size() << " cells written to " << a.out << "\n";
    return any_failed ? kExitNumerical : kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gappy and low-resolution flow data repair with truncated SVD/HOSVD", "modalrepair"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "evaluate a synthetic generator spec into an MFT file");
    g->add_option("--spec", gen.spec, "generator spec (JSON)")->required();
    g->add_option("--out", gen.out, "output MFT file")->required();
    g->add_option("--seed", gen.seed, "override the spec's noise seed");

    InjectArgs inj;
    auto* ig = app.add_subcommand("inject-gaps", "remove a random fraction of entries");
    ig->add_option("input", inj.input)->required();
    ig->add_option("--fraction", inj.fraction)->required();
    ig->add_option("--seed", inj.seed)->capture_default_str();
    ig->add_option("--out", inj.out)->required();

    DownsampleArgs ds;
    auto* dsc = app.add_subcommand("downsample", "keep every n-th point along each spatial axis");
    dsc->add_option("input", ds.input)->required();
    dsc->add_option("--factors", ds.factors, "one factor, or one per spatial axis")->delimiter(',')->required();
    dsc->add_option("--out", ds.out)->required();

    RepairArgs rep;
    auto* rc = app.add_subcommand("repair", "fill gaps with iterated truncated SVD/HOSVD");
    rc->add_option("input", rep.input, "MFT file; NaN entries are gaps")->required();
    rc->add_option("--fraction", rep.fraction, "inject this fraction of gaps into a complete input first");
    rc->add_option("--seed", rep.seed, "gap injection seed")->capture_default_str();
    rc->add_option("--truth", rep.truth, "complete reference for the error report");
    rc->add_option("--out", rep.out, "repaired MFT file");
    rc->add_option("--report", rep.report, "JSON report");
    rep.solver.attach(*rc);

    EnhanceArgs enh;
    auto* ec = app.add_subcommand("enhance", "superresolve coarse data onto a finer grid");
    ec->add_option("input", enh.input, "coarse MFT file")->required();
    ec->add_option("--target", enh.target, "target spatial dims")->delimiter(',')->required();
    ec->add_option("--strides", enh.strides, "placement stride per axis")->delimiter(',');
    ec->add_flag("--enhance-time", enh.enhance_time, "also insert midpoint snapshots");
    ec->add_option("--truth", enh.truth, "fine-grid reference for the error report");
    ec->add_option("--out", enh.out, "enhanced MFT file");
    ec->add_option("--report", enh.report, "JSON report");
    enh.solver.attach(*ec);

    AnalyzeArgs an;
    auto* ac = app.add_subcommand("analyze", "error fields, PDFs and worst snapshots of a reconstruction");
    ac->add_option("input", an.input, "reconstruction MFT file")->required();
    ac->add_option("--truth", an.truth, "reference MFT file")->required();
    ac->add_option("--out", an.out, "output directory")->required();
    ac->add_option("--bins", an.bins)->capture_default_str();
    ac->add_flag("--smooth", an.smooth, "kernel density estimate instead of a histogram");
    ac->add_flag("--per-snapshot", an.per_snapshot, "also write one PDF per snapshot");

    MatrixArgs mx;
    auto* mc = app.add_subcommand("matrix", "run a grid of repair and superresolution experiments");
    mc->add_option("--input", mx.input, "complete MFT dataset");
    mc->add_option("--spec", mx.spec, "generator spec instead of an input file");
    mc->add_option("--out", mx.out, "output directory")->required();
    mc->add_option("--fractions", mx.fractions)->delimiter(',')->capture_default_str();
    mc->add_option("--resolutions", mx.resolutions, "downsample factors")->delimiter(',')->capture_default_str();
    mc->add_option("--modes", mx.modes, "retained ranks")->delimiter(',')->capture_default_str();
    mc->add_option("--init", mx.inits, "initial fills to compare")
        ->delimiter(',')
        ->check(CLI::IsMember({"zeros", "mean", "interp", "linear-interp"}))
        ->capture_default_str();
    mc->add_option("--kind", mx.kind)->check(CLI::IsMember({"gappy", "superres", "both"}))->capture_default_str();
    mc->add_option("--seed", mx.seed)->capture_default_str();
    mc->add_option("--jobs", mx.jobs, "parallel cells")->check(CLI::PositiveNumber)->capture_default_str();
    mx.solver.attach(*mc, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*g) return cmd_generate(gen, out);
        if (*ig) return cmd_inject(inj, out);
        if (*dsc) return cmd_downsample(ds, out);
        if (*rc) return cmd_repair(rep, out);
        if (*ec) return cmd_enhance(enh, out);
        if (*ac) return cmd_analyze(an, out);
        if (*mc) return cmd_matrix(mx, out);
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace modalrepair
