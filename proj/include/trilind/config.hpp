// config.hpp — run configuration: schema, parsing (flat key-value text or
// JSON), defaults, and validation.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trilind/lindblad.hpp"
#include "trilind/model.hpp"

namespace trilind {

enum class ModelKind { full, beamsplitter, squeeze };
enum class TaskKind { dynamics, steady, sweep, wigner, spectrum, g2tau };
enum class TimeUnits { inv_gamma, gt_over_pi };
enum class WignerSource { steady, snapshot };

const char* model_name(ModelKind m);
const char* task_name(TaskKind t);

struct InitialState {
    bool vacuum_excited = true; // |0, 0, e>
    int n_a = 0;
    int n_b = 0;
    SpinState s = SpinState::e;
};

struct SweepAxis {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    int points = 2;
};

struct RunConfig {
    ModelKind model = ModelKind::squeeze;
    TaskKind task = TaskKind::steady;

    // Parameter pool; the model decides which entries form the Hamiltonian.
    // Decay rates gamma/kappa_a/kappa_b are shared by all models.
    SystemParams sys;
    EffectiveParams eff;
    bool lock_delta_b_to_delta_a = false;

    int n_a_max = 5;
    int n_b_max = 5;
    double tail_warn = 1e-6;
    double tail_error = 1e-3;

    InitialState initial;

    double t_max = 1.0;
    int t_points = 201;
    TimeUnits units = TimeUnits::inv_gamma;

    std::vector<SweepAxis> sweep; // 0..2 axes; none = single point

    double wigner_x_max = 3.0;
    int wigner_points = 101;
    WignerSource wigner_source = WignerSource::steady;
    double wigner_snapshot_time = 0.0; // in `units`

    double g2tau_max = 0.0; // 0 = auto 20/kappa_a
    int g2tau_points = 200;

    int spectrum_n_max = 3;
    double spectrum_delta_min = 0.0;
    double spectrum_delta_max = 0.0;
    int spectrum_delta_points = 1;
    bool spectrum_delta_from_params = true;

    StepMethod method = StepMethod::adaptive_rk45;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double max_step = 0.0;    // 0 = unbounded
    double fixed_step = 0.0;  // required for rk4

    bool kappa_b_on_cavity = false; // alternate dissipator assignment
    bool dist_output = false;
    std::string output_dir = "trilind_out";

    // Time values (t_max, snapshot) converted to 1/gamma.
    double to_inv_gamma(double value) const;
    double active_g() const;

    // Names sweepable under the active model.
    std::vector<std::string> sweepable_names() const;

    // Canonical flat echo of every effective key, in schema order.
    std::vector<std::pair<std::string, std::string>> flatten() const;
};

// Parse and validate a single-run configuration. The format is detected from
// the content: a leading '{' selects JSON, otherwise the key-value grammar.
// Unknown keys, missing sections, and out-of-range values throw ConfigError
// naming the key.
RunConfig validate_config(const std::string& raw);

// Multi-run variant of the key-value grammar: keys before any "[run <label>]"
// header form a shared base; each section overrides it. A file without
// headers yields one run with an empty label. JSON input is single-run.
std::vector<std::pair<std::string, RunConfig>> parse_runs(const std::string& raw);

std::string read_text_file(const std::string& path);

} // namespace trilind
