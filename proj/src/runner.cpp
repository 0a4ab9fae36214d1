// runner.cpp — task execution and file output

#include "trilind/runner.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <thread>

#include "json.hpp"

#include "trilind/analytic.hpp"
#include "trilind/log.hpp"
#include "trilind/version.hpp"

namespace trilind {

namespace fs = std::filesystem;
using OrderedJson = nlohmann::ordered_json;

std::string csv_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

HilbertSpace config_space(const RunConfig& cfg) {
    return build_space(cfg.n_a_max, cfg.n_b_max);
}

Operator config_hamiltonian(const RunConfig& cfg, const HilbertSpace& space) {
    switch (cfg.model) {
        case ModelKind::full: return build_full_hamiltonian(cfg.sys, space);
        case ModelKind::beamsplitter: return build_beamsplitter_hamiltonian(cfg.eff, space);
        case ModelKind::squeeze: return build_squeeze_hamiltonian(cfg.eff, space);
    }
    throw Error("unknown model");
}

CollapseSet config_collapses(const RunConfig& cfg, const HilbertSpace& space) {
    CollapseSet set;
    set.channels.push_back({cfg.sys.gamma, spin_operator(space, SpinKind::minus)});
    set.channels.push_back({cfg.sys.kappa_a, mode_annihilator(space, Subsystem::cavity)});
    const Subsystem third = cfg.kappa_b_on_cavity ? Subsystem::cavity : Subsystem::phonon;
    set.channels.push_back({cfg.sys.kappa_b, mode_annihilator(space, third)});
    return set;
}

DensityMatrix config_initial_state(const RunConfig& cfg, const HilbertSpace& space) {
    if (cfg.initial.vacuum_excited) {
        return basis_state(space, 0, 0, SpinState::e).to_density();
    }
    return basis_state(space, cfg.initial.n_a, cfg.initial.n_b, cfg.initial.s).to_density();
}

EvolutionSpec config_evolution_spec(const RunConfig& cfg) {
    EvolutionSpec spec = EvolutionSpec::linear(cfg.to_inv_gamma(cfg.t_max), cfg.t_points);
    spec.rel_tol = cfg.rel_tol;
    spec.abs_tol = cfg.abs_tol;
    if (cfg.max_step > 0.0) spec.max_step = cfg.max_step;
    spec.method = cfg.method;
    spec.fixed_step = cfg.fixed_step;
    return spec;
}

namespace {

class CsvFile {
public:
    CsvFile(const fs::path& path, const std::vector<std::string>& header) {
        out_.open(path, std::ios::binary);
        if (!out_) throw Error("cannot open output file " + path.string());
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i > 0) out_ << ',';
            out_ << header[i];
        }
        out_ << '\n';
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

struct RunContext {
    const RunConfig& cfg;
    fs::path out_dir;
    RunReport report;
    OrderedJson solver_stats = OrderedJson::object();
    OrderedJson tails = OrderedJson::object();
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

    void warn(const std::string& msg) {
        report.warnings.push_back(msg);
        log::warn(msg);
    }
    void fail(const std::string& msg) {
        report.errors.push_back(msg);
        report.exit_code = std::max(report.exit_code, 2);
        log::error(msg);
    }
};

void write_metadata(RunContext& ctx) {
    OrderedJson doc;
    OrderedJson config = OrderedJson::object();
    for (const auto& [key, value] : ctx.cfg.flatten()) config[key] = value;
    doc["config"] = std::move(config);
    doc["solver"] = ctx.solver_stats;
    doc["tails"] = ctx.tails;
    doc["warnings"] = ctx.report.warnings;
    doc["errors"] = ctx.report.errors;
    doc["version"] = std::string(kVersion);
    const auto elapsed = std::chrono::steady_clock::now() - ctx.started;
    doc["wall_time_s"] = std::chrono::duration<double>(elapsed).count();

    std::ofstream out(ctx.out_dir / "metadata.json", std::ios::binary);
    if (!out) throw Error("cannot write metadata.json");
    out << doc.dump(2) << '\n';
}

// Tail monitoring per the truncation-adequacy rule: p(n_max) above tail_warn
// is a warning record, above tail_error a failure.
bool check_tails(RunContext& ctx, const DensityMatrix& rho, const std::string& where,
                 double* tail_a_out = nullptr, double* tail_b_out = nullptr) {
    const double tail_a = number_distribution(rho, Subsystem::cavity).tail();
    const double tail_b = number_distribution(rho, Subsystem::phonon).tail();
    if (tail_a_out != nullptr) *tail_a_out = tail_a;
    if (tail_b_out != nullptr) *tail_b_out = tail_b;
    if (tail_a > ctx.cfg.tail_error || tail_b > ctx.cfg.tail_error) {
        ctx.fail("truncation tails (" + csv_number(tail_a) + ", " + csv_number(tail_b) +
                 ") exceed " + csv_number(ctx.cfg.tail_error) + " at " + where);
        return false;
    }
    if (tail_a > ctx.cfg.tail_warn || tail_b > ctx.cfg.tail_warn) {
        ctx.warn("truncation tails (" + csv_number(tail_a) + ", " + csv_number(tail_b) +
                 ") exceed " + csv_number(ctx.cfg.tail_warn) + " at " + where);
    }
    return true;
}

std::string g2_or_nan(const DensityMatrix& rho, Subsystem mode) {
    try {
        return csv_number(g2_zero(rho, mode));
    } catch (const CorrelationUndefined&) {
        return "nan";
    }
}

// ------------------------------- dynamics ----------------------------------

void run_dynamics(RunContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    const HilbertSpace space = config_space(cfg);
    const Liouvillian liou = build_liouvillian(config_hamiltonian(cfg, space),
                                               config_collapses(cfg, space));
    const DensityMatrix rho0 = config_initial_state(cfg, space);
    const EvolutionSpec spec = config_evolution_spec(cfg);

    CsvFile table(ctx.out_dir / "dynamics.csv",
                  {"t", "n_a", "n_b", "spin_exc", "n_e", "g2_aa_0", "g2_bb_0"});
    std::unique_ptr<CsvFile> dist;
    if (cfg.dist_output) {
        dist = std::make_unique<CsvFile>(ctx.out_dir / "dist.csv",
                                         std::vector<std::string>{"t", "mode", "q", "p"});
    }

    double max_tail_a = 0.0;
    double max_tail_b = 0.0;
    bool aborted = false;

    EvolveStats stats{};
    try {
        stats = evolve_observe(rho0, liou, spec,
                               [&](std::size_t, double t, const DensityMatrix& rho) {
            if (aborted) return;
            const MomentRecord m = moments(rho);
            table.row({csv_number(t), csv_number(m.n_a), csv_number(m.n_b),
                       csv_number(m.spin_exc), csv_number(m.n_e),
                       g2_or_nan(rho, Subsystem::cavity), g2_or_nan(rho, Subsystem::phonon)});
            if (dist) {
                for (Subsystem mode : {Subsystem::cavity, Subsystem::phonon}) {
                    const NumberDistribution nd = number_distribution(rho, mode);
                    for (std::size_t q = 0; q < nd.p.size(); ++q) {
                        dist->row({csv_number(t), subsystem_name(mode), std::to_string(q),
                                   csv_number(nd.p[q])});
                    }
                }
            }
            double tail_a = 0.0, tail_b = 0.0;
            if (!check_tails(ctx, rho, "t=" + csv_number(t), &tail_a, &tail_b)) aborted = true;
            max_tail_a = std::max(max_tail_a, tail_a);
            max_tail_b = std::max(max_tail_b, tail_b);
        });
    } catch (const IntegrationError& e) {
        ctx.fail(e.what());
    }

    ctx.solver_stats["steps_taken"] = stats.steps_taken;
    ctx.solver_stats["steps_rejected"] = stats.steps_rejected;
    ctx.solver_stats["max_trace_drift"] = stats.max_trace_drift;
    ctx.tails["max_tail_a"] = max_tail_a;
    ctx.tails["max_tail_b"] = max_tail_b;
}

// -------------------------------- steady -----------------------------------

DensityMatrix solve_steady(RunContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    const HilbertSpace space = config_space(cfg);
    const Liouvillian liou = build_liouvillian(config_hamiltonian(cfg, space),
                                               config_collapses(cfg, space));
    SteadyStats stats;
    DensityMatrix rho = steady_state(liou, &stats);
    ctx.solver_stats["residual"] = stats.residual;
    ctx.solver_stats["refinement_steps"] = stats.refinement_steps;
    return rho;
}

void run_steady(RunContext& ctx) {
    const DensityMatrix rho = solve_steady(ctx);
    const MomentRecord m = moments(rho);
    double tail_a = 0.0, tail_b = 0.0;
    check_tails(ctx, rho, "steady state", &tail_a, &tail_b);
    ctx.tails["tail_a"] = tail_a;
    ctx.tails["tail_b"] = tail_b;

    CsvFile table(ctx.out_dir / "steady.csv",
                  {"n_a_ss", "n_b_ss", "spin_exc", "n_e", "g2_aa_0", "g2_bb_0", "tail_a",
                   "tail_b"});
    table.row({csv_number(m.n_a), csv_number(m.n_b), csv_number(m.spin_exc), csv_number(m.n_e),
               g2_or_nan(rho, Subsystem::cavity), g2_or_nan(rho, Subsystem::phonon),
               csv_number(tail_a), csv_number(tail_b)});

    if (ctx.cfg.dist_output) {
        CsvFile dist(ctx.out_dir / "dist.csv", {"mode", "q", "p"});
        for (Subsystem mode : {Subsystem::cavity, Subsystem::phonon}) {
            const NumberDistribution nd = number_distribution(rho, mode);
            for (std::size_t q = 0; q < nd.p.size(); ++q) {
                dist.row({subsystem_name(mode), std::to_string(q), csv_number(nd.p[q])});
            }
        }
    }
}

// --------------------------------- sweep -----------------------------------

RunConfig config_at_point(const RunConfig& base, const std::vector<double>& values) {
    RunConfig cfg = base;
    for (std::size_t i = 0; i < base.sweep.size(); ++i) {
        const std::string& name = base.sweep[i].name;
        const double v = values[i];
        if (name == "g") {
            cfg.sys.g = v;
            cfg.eff.g = v;
        } else if (name == "omega_b") {
            cfg.sys.omega_b = v;
        } else if (name == "delta_c") {
            cfg.sys.delta_c = v;
        } else if (name == "delta_atom") {
            cfg.sys.delta_atom = v;
        } else if (name == "omega_pump") {
            cfg.sys.omega_pump = v;
            cfg.eff.omega_pump = v;
        } else if (name == "gamma") {
            cfg.sys.gamma = v;
        } else if (name == "kappa_a") {
            cfg.sys.kappa_a = v;
        } else if (name == "kappa_b") {
            cfg.sys.kappa_b = v;
        } else if (name == "delta_a") {
            cfg.eff.delta_a = v;
        } else if (name == "delta_b") {
            cfg.eff.delta_b = v;
        } else if (name == "delta") {
            cfg.eff.delta = v;
        } else {
            throw ConfigError("unknown sweep parameter '" + name + "'");
        }
    }
    if (cfg.lock_delta_b_to_delta_a) cfg.eff.delta_b = cfg.eff.delta_a;
    return cfg;
}

std::vector<double> axis_values(const SweepAxis& axis) {
    std::vector<double> vals(axis.points);
    for (int i = 0; i < axis.points; ++i) {
        vals[i] = (axis.points == 1)
                      ? axis.min
                      : axis.min + (axis.max - axis.min) * i / (axis.points - 1);
    }
    return vals;
}

SweepRecord solve_point(const RunConfig& base, const std::vector<double>& values) {
    SweepRecord rec;
    rec.swept = values;
    const RunConfig cfg = config_at_point(base, values);
    try {
        const HilbertSpace space = config_space(cfg);
        const Liouvillian liou = build_liouvillian(config_hamiltonian(cfg, space),
                                                   config_collapses(cfg, space));
        const DensityMatrix rho = steady_state(liou);
        const MomentRecord m = moments(rho);
        rec.n_a_ss = m.n_a;
        rec.n_b_ss = m.n_b;
        rec.g2_aa_0 = g2_zero(rho, Subsystem::cavity);
        rec.g2_bb_0 = g2_zero(rho, Subsystem::phonon);
        rec.tail_a = number_distribution(rho, Subsystem::cavity).tail();
        rec.tail_b = number_distribution(rho, Subsystem::phonon).tail();
        rec.converged = rec.tail_a <= cfg.tail_error && rec.tail_b <= cfg.tail_error;
    } catch (const Error& e) {
        log::warn(std::string("sweep point failed: ") + e.what());
        rec.converged = false;
    }
    return rec;
}

} // namespace

std::vector<SweepRecord> sweep_grid(const RunConfig& cfg, int jobs) {
    std::vector<std::vector<double>> grid;
    if (cfg.sweep.empty()) {
        grid.push_back({});
    } else if (cfg.sweep.size() == 1) {
        for (double v : axis_values(cfg.sweep[0])) grid.push_back({v});
    } else {
        for (double v1 : axis_values(cfg.sweep[0]))
            for (double v2 : axis_values(cfg.sweep[1])) grid.push_back({v1, v2});
    }

    std::vector<SweepRecord> records(grid.size());
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(grid.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < grid.size(); ++i) records[i] = solve_point(cfg, grid[i]);
        return records;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= grid.size()) break;
                records[i] = solve_point(cfg, grid[i]);
            }
        });
    }
    for (auto& t : pool) t.join();
    return records;
}

namespace {

void run_sweep(RunContext& ctx, int jobs) {
    const RunConfig& cfg = ctx.cfg;
    const auto records = sweep_grid(cfg, jobs);

    std::vector<std::string> header;
    for (const auto& axis : cfg.sweep) header.push_back(axis.name);
    for (const char* col : {"n_a_ss", "n_b_ss", "g2_aa_0", "g2_bb_0", "tail_a", "tail_b",
                            "converged"}) {
        header.emplace_back(col);
    }

    CsvFile table(ctx.out_dir / "sweep.csv", header);
    std::size_t failures = 0;
    for (const auto& rec : records) {
        std::vector<std::string> cells;
        for (double v : rec.swept) cells.push_back(csv_number(v));
        if (rec.converged) {
            cells.push_back(csv_number(rec.n_a_ss));
            cells.push_back(csv_number(rec.n_b_ss));
            cells.push_back(csv_number(rec.g2_aa_0));
            cells.push_back(csv_number(rec.g2_bb_0));
        } else {
            for (int i = 0; i < 4; ++i) cells.emplace_back("nan");
            ++failures;
        }
        cells.push_back(csv_number(rec.tail_a));
        cells.push_back(csv_number(rec.tail_b));
        cells.push_back(rec.converged ? "1" : "0");
        table.row(cells);
    }

    ctx.solver_stats["grid_points"] = records.size();
    ctx.solver_stats["failed_points"] = failures;
    if (failures > 0) {
        ctx.warn(std::to_string(failures) + " of " + std::to_string(records.size()) +
                 " grid points did not converge");
    }
    if (failures * 10 > records.size()) {
        ctx.fail("more than 10% of sweep points failed");
    }
}

// --------------------------------- wigner ----------------------------------

void run_wigner(RunContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    DensityMatrix rho{{}, {}};
    if (cfg.wigner_source == WignerSource::steady) {
        rho = solve_steady(ctx);
    } else {
        const HilbertSpace space = config_space(cfg);
        const Liouvillian liou = build_liouvillian(config_hamiltonian(cfg, space),
                                                   config_collapses(cfg, space));
        const double t_snap = cfg.to_inv_gamma(cfg.wigner_snapshot_time);
        EvolutionSpec spec = config_evolution_spec(cfg);
        spec.t_grid = {0.0, t_snap};
        const Trajectory traj = evolve(config_initial_state(cfg, space), liou, spec);
        ctx.solver_stats["steps_taken"] = traj.steps_taken;
        ctx.solver_stats["max_trace_drift"] = traj.max_trace_drift;
        rho = traj.state_at(1);
    }
    check_tails(ctx, rho, "wigner source state");

    const WignerGridSpec grid_spec{cfg.wigner_x_max, cfg.wigner_points};
    for (Subsystem mode : {Subsystem::cavity, Subsystem::phonon}) {
        const WignerGrid grid = wigner(partial_trace(rho, mode), grid_spec);
        const std::string file =
            (mode == Subsystem::cavity) ? "wigner_cavity.csv" : "wigner_phonon.csv";
        CsvFile table(ctx.out_dir / file, {"re_alpha", "im_alpha", "w"});
        for (std::size_t i = 0; i < grid.axis.size(); ++i) {
            for (std::size_t j = 0; j < grid.axis.size(); ++j) {
                table.row({csv_number(grid.axis[i]), csv_number(grid.axis[j]),
                           csv_number(grid.values(i, j))});
            }
        }
        ctx.tails[std::string("wigner_norm_") + subsystem_name(mode)] = grid.norm_sum;
        if (!grid.norm_ok) {
            ctx.warn(std::string("wigner normalization off for ") + subsystem_name(mode) +
                     " (sum " + csv_number(grid.norm_sum) + "); enlarge the grid");
        }
    }
}

// -------------------------------- spectrum ---------------------------------

void run_spectrum(RunContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    std::vector<double> deltas(cfg.spectrum_delta_points);
    for (int i = 0; i < cfg.spectrum_delta_points; ++i) {
        deltas[i] = (cfg.spectrum_delta_points == 1)
                        ? cfg.spectrum_delta_min
                        : cfg.spectrum_delta_min +
                              (cfg.spectrum_delta_max - cfg.spectrum_delta_min) * i /
                                  (cfg.spectrum_delta_points - 1);
    }

    CsvFile table(ctx.out_dir / "spectrum.csv",
                  {"n", "e_plus", "e_minus", "delta_a_plus", "delta_a_minus"});
    for (double delta : deltas) {
        const RabiSplitting split = rabi_splitting(delta, cfg.eff.g);
        for (int n = 1; n <= cfg.spectrum_n_max; ++n) {
            const SpectrumPoint pt = squeeze_spectrum(n, n, cfg.eff.delta_a, delta, cfg.eff.g);
            table.row({std::to_string(n), csv_number(pt.e_plus), csv_number(pt.e_minus),
                       csv_number(split.upper), csv_number(split.lower)});
        }
    }
    OrderedJson dgrid = OrderedJson::array();
    for (double d : deltas) dgrid.push_back(d);
    ctx.solver_stats["delta_grid"] = std::move(dgrid);
}

// --------------------------------- g2tau -----------------------------------

void run_g2tau(RunContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    const DensityMatrix rho = solve_steady(ctx);
    check_tails(ctx, rho, "steady state");

    const double tau_max =
        (cfg.g2tau_max > 0.0) ? cfg.g2tau_max
                              : 20.0 / std::max(cfg.sys.kappa_a, 1e-12);
    const std::vector<double> tau = default_tau_grid(tau_max, cfg.g2tau_points);

    const HilbertSpace space = config_space(cfg);
    const Liouvillian liou = build_liouvillian(config_hamiltonian(cfg, space),
                                               config_collapses(cfg, space));
    EvolutionSpec base = config_evolution_spec(cfg);

    const std::vector<double> g2_aa = g2_tau(liou, rho, Subsystem::cavity, tau, &base);
    const std::vector<double> g2_bb = g2_tau(liou, rho, Subsystem::phonon, tau, &base);

    CsvFile table(ctx.out_dir / "g2tau.csv", {"tau", "g2_aa", "g2_bb"});
    for (std::size_t i = 0; i < tau.size(); ++i) {
        table.row({csv_number(tau[i]), csv_number(g2_aa[i]), csv_number(g2_bb[i])});
    }
}

} // namespace

RunReport run_config(const RunConfig& cfg, const std::string& out_dir, int jobs) {
    RunContext ctx{cfg, fs::path(out_dir), {}, {}, {}, {}};
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
    if (ec) {
        ctx.report.exit_code = 1;
        ctx.report.errors.push_back("cannot create output directory " + out_dir);
        return ctx.report;
    }

    try {
        switch (cfg.task) {
            case TaskKind::dynamics: run_dynamics(ctx); break;
            case TaskKind::steady: run_steady(ctx); break;
            case TaskKind::sweep: run_sweep(ctx, jobs); break;
            case TaskKind::wigner: run_wigner(ctx); break;
            case TaskKind::spectrum: run_spectrum(ctx); break;
            case TaskKind::g2tau: run_g2tau(ctx); break;
        }
    } catch (const Error& e) {
        ctx.fail(e.what());
    }

    write_metadata(ctx);
    return ctx.report;
}

RunReport run_config_text(const std::string& text, const std::string& out_dir, int jobs) {
    const auto runs = parse_runs(text);
    RunReport merged;
    for (const auto& [label, cfg] : runs) {
        const std::string dir =
            label.empty() ? out_dir : (fs::path(out_dir) / label).string();
        log::info("running " + std::string(task_name(cfg.task)) +
                  (label.empty() ? "" : " [" + label + "]") + " into " + dir);
        const RunReport rep = run_config(cfg, dir, jobs);
        merged.exit_code = std::max(merged.exit_code, rep.exit_code);
        for (const auto& w : rep.warnings) merged.warnings.push_back(label + ": " + w);
        for (const auto& e : rep.errors) merged.errors.push_back(label + ": " + e);
    }
    return merged;
}

} // namespace trilind
