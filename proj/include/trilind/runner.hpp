// runner.hpp — executes validated configurations: builds the engine objects,
// runs the requested task, and writes CSV + metadata files.

#pragma once

#include <string>
#include <vector>

#include "trilind/config.hpp"
#include "trilind/observables.hpp"

namespace trilind {

// One grid point of a steady-state sweep.
struct SweepRecord {
    std::vector<double> swept; // axis values, axis1 first
    double n_a_ss = 0.0;
    double n_b_ss = 0.0;
    double g2_aa_0 = 0.0;
    double g2_bb_0 = 0.0;
    double tail_a = 0.0;
    double tail_b = 0.0;
    bool converged = false;
};

struct RunReport {
    int exit_code = 0; // 0 ok, 1 config error, 2 solver/truncation failure
    std::vector<std::string> warnings;
    std::vector<std::string> errors;
};

// Executes a single run into out_dir. jobs > 1 parallelizes sweep grids; all
// other tasks are single-threaded. Output bytes are independent of jobs.
RunReport run_config(const RunConfig& cfg, const std::string& out_dir, int jobs);

// Executes every run of a (possibly multi-run) config text; run labels become
// subdirectories of out_dir. Returns the worst exit code.
RunReport run_config_text(const std::string& text, const std::string& out_dir, int jobs);

// Shared model assembly, exposed for tests and the acceptance suite.
HilbertSpace config_space(const RunConfig& cfg);
Operator config_hamiltonian(const RunConfig& cfg, const HilbertSpace& space);
CollapseSet config_collapses(const RunConfig& cfg, const HilbertSpace& space);
DensityMatrix config_initial_state(const RunConfig& cfg, const HilbertSpace& space);
EvolutionSpec config_evolution_spec(const RunConfig& cfg);

// Steady-state sweep engine (deterministic row-major order over axis1, axis2).
std::vector<SweepRecord> sweep_grid(const RunConfig& cfg, int jobs);

// 17-significant-digit, locale-independent float formatting used in all CSVs.
std::string csv_number(double v);

} // namespace trilind
