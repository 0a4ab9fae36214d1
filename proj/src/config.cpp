// config.cpp — schema-driven parsing and validation

#include "trilind/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace trilind {

const char* model_name(ModelKind m) {
    switch (m) {
        case ModelKind::full: return "full";
        case ModelKind::beamsplitter: return "beamsplitter";
        case ModelKind::squeeze: return "squeeze";
    }
    return "?";
}

const char* task_name(TaskKind t) {
    switch (t) {
        case TaskKind::dynamics: return "dynamics";
        case TaskKind::steady: return "steady";
        case TaskKind::sweep: return "sweep";
        case TaskKind::wigner: return "wigner";
        case TaskKind::spectrum: return "spectrum";
        case TaskKind::g2tau: return "g2tau";
    }
    return "?";
}

double RunConfig::active_g() const {
    return (model == ModelKind::full) ? sys.g : eff.g;
}

double RunConfig::to_inv_gamma(double value) const {
    if (units == TimeUnits::gt_over_pi) {
        const double g = active_g();
        if (!(g > 0.0)) throw ConfigError("time.units=gt_over_pi requires params.g > 0");
        return value * M_PI / g;
    }
    return value;
}

std::vector<std::string> RunConfig::sweepable_names() const {
    if (model == ModelKind::full) {
        return {"g",          "omega_b", "delta_c", "delta_atom",
                "omega_pump", "gamma",   "kappa_a", "kappa_b"};
    }
    return {"g", "delta_a", "delta_b", "delta", "omega_pump", "gamma", "kappa_a", "kappa_b"};
}

namespace {

using FlatMap = std::map<std::string, std::string>;

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_number(const std::string& key, const std::string& value) {
    double out = 0.0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    const auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc() || res.ptr != end) {
        throw ConfigError(key + ": expected a number, got '" + value + "'");
    }
    return out;
}

int parse_int(const std::string& key, const std::string& value) {
    const double d = parse_number(key, value);
    const int i = static_cast<int>(std::llround(d));
    if (std::abs(d - i) > 1e-9) throw ConfigError(key + ": expected an integer, got '" + value + "'");
    return i;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw ConfigError(key + ": expected true or false, got '" + value + "'");
}

// The full key schema; every accepted key appears here exactly once.
const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "model",
        "task",
        "params.g",
        "params.omega_b",
        "params.delta_c",
        "params.delta_atom",
        "params.omega_pump",
        "params.gamma",
        "params.kappa_a",
        "params.kappa_b",
        "params.delta_a",
        "params.delta_b",
        "params.delta",
        "params.lock_delta_b_to_delta_a",
        "truncation.n_a_max",
        "truncation.n_b_max",
        "truncation.tail_warn",
        "truncation.tail_error",
        "initial.kind",
        "initial.n_a",
        "initial.n_b",
        "initial.spin",
        "time.t_max",
        "time.n_points",
        "time.units",
        "sweep.axis1.name",
        "sweep.axis1.min",
        "sweep.axis1.max",
        "sweep.axis1.points",
        "sweep.axis2.name",
        "sweep.axis2.min",
        "sweep.axis2.max",
        "sweep.axis2.points",
        "wigner.x_max",
        "wigner.n_points",
        "wigner.source",
        "wigner.snapshot_time",
        "g2tau.tau_max",
        "g2tau.n_points",
        "spectrum.n_max",
        "spectrum.delta_min",
        "spectrum.delta_max",
        "spectrum.delta_points",
        "solver.method",
        "solver.rel_tol",
        "solver.abs_tol",
        "solver.max_step",
        "solver.fixed_step",
        "collapse.kappa_b_on_cavity",
        "output.dir",
        "output.distributions",
    };
    return keys;
}

void insert_checked(FlatMap& map, const std::string& key, const std::string& value) {
    if (known_keys().count(key) == 0) throw ConfigError("unknown key '" + key + "'");
    map[key] = value;
}

// ----------------------------- text grammar --------------------------------

struct RawRun {
    std::string label;
    FlatMap entries;
};

std::vector<RawRun> parse_text(const std::string& raw) {
    std::vector<RawRun> runs;
    FlatMap base;
    RawRun* current = nullptr;

    std::istringstream in(raw);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line.substr(0, line.find('#')));
        if (stripped.empty()) continue;

        if (stripped.front() == '[') {
            if (stripped.back() != ']') {
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            }
            const std::string header = trim(stripped.substr(1, stripped.size() - 2));
            if (header.rfind("run", 0) != 0) {
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": only [run <label>] sections are supported");
            }
            const std::string label = trim(header.substr(3));
            if (label.empty()) {
                throw ConfigError("line " + std::to_string(lineno) + ": run label missing");
            }
            runs.push_back({label, base});
            current = &runs.back();
            continue;
        }

        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        }
        if (current != nullptr) {
            insert_checked(current->entries, key, value);
        } else {
            insert_checked(base, key, value);
        }
    }

    if (runs.empty()) runs.push_back({"", std::move(base)});
    return runs;
}

// ------------------------------ JSON façade --------------------------------

void flatten_json(const nlohmann::json& node, const std::string& prefix, FlatMap& out) {
    if (node.is_object()) {
        for (const auto& [key, value] : node.items()) {
            const std::string path = prefix.empty() ? key : prefix + "." + key;
            flatten_json(value, path, out);
        }
        return;
    }
    std::string text;
    if (node.is_string()) {
        text = node.get<std::string>();
    } else if (node.is_boolean()) {
        text = node.get<bool>() ? "true" : "false";
    } else if (node.is_number_integer()) {
        text = std::to_string(node.get<long long>());
    } else if (node.is_number()) {
        text = format_double(node.get<double>());
    } else {
        throw ConfigError("unsupported JSON value at '" + prefix + "'");
    }
    insert_checked(out, prefix, text);
}

std::vector<RawRun> parse_json(const std::string& raw) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("JSON parse failure: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("JSON config must be an object");
    FlatMap map;
    flatten_json(doc, "", map);
    return {{"", std::move(map)}};
}

// ------------------------------- validation --------------------------------

class Schema {
public:
    explicit Schema(const FlatMap& map) : map_(map) {}

    bool has(const std::string& key) const { return map_.count(key) > 0; }

    std::string str(const std::string& key, const std::string& fallback) const {
        const auto it = map_.find(key);
        return it == map_.end() ? fallback : it->second;
    }

    std::string required_str(const std::string& key) const {
        const auto it = map_.find(key);
        if (it == map_.end()) throw ConfigError("missing required key '" + key + "'");
        return it->second;
    }

    double num(const std::string& key, double fallback) const {
        const auto it = map_.find(key);
        return it == map_.end() ? fallback : parse_number(key, it->second);
    }

    int integer(const std::string& key, int fallback) const {
        const auto it = map_.find(key);
        return it == map_.end() ? fallback : parse_int(key, it->second);
    }

    bool boolean(const std::string& key, bool fallback) const {
        const auto it = map_.find(key);
        return it == map_.end() ? fallback : parse_bool(key, it->second);
    }

private:
    const FlatMap& map_;
};

ModelKind parse_model(const std::string& v) {
    if (v == "full") return ModelKind::full;
    if (v == "beamsplitter") return ModelKind::beamsplitter;
    if (v == "squeeze") return ModelKind::squeeze;
    throw ConfigError("model: expected full|beamsplitter|squeeze, got '" + v + "'");
}

TaskKind parse_task(const std::string& v) {
    if (v == "dynamics") return TaskKind::dynamics;
    if (v == "steady") return TaskKind::steady;
    if (v == "sweep") return TaskKind::sweep;
    if (v == "wigner") return TaskKind::wigner;
    if (v == "spectrum") return TaskKind::spectrum;
    if (v == "g2tau") return TaskKind::g2tau;
    throw ConfigError("task: expected dynamics|steady|sweep|wigner|spectrum|g2tau, got '" + v +
                      "'");
}

std::optional<SweepAxis> parse_axis(const Schema& s, const std::string& prefix) {
    if (!s.has(prefix + ".name")) {
        for (const char* sub : {".min", ".max", ".points"}) {
            if (s.has(prefix + sub)) {
                throw ConfigError(prefix + sub + " given without " + prefix + ".name");
            }
        }
        return std::nullopt;
    }
    SweepAxis axis;
    axis.name = s.required_str(prefix + ".name");
    axis.min = parse_number(prefix + ".min", s.required_str(prefix + ".min"));
    axis.max = parse_number(prefix + ".max", s.required_str(prefix + ".max"));
    axis.points = parse_int(prefix + ".points", s.required_str(prefix + ".points"));
    if (axis.points < 2) throw ConfigError(prefix + ".points: must be >= 2");
    return axis;
}

RunConfig build_config(const FlatMap& map) {
    const Schema s(map);
    RunConfig cfg;

    cfg.model = parse_model(s.required_str("model"));
    cfg.task = parse_task(s.required_str("task"));

    cfg.sys.g = s.num("params.g", 40.0);
    cfg.sys.omega_b = s.num("params.omega_b", 400.0);
    cfg.sys.delta_c = s.num("params.delta_c", -cfg.sys.omega_b);
    cfg.sys.delta_atom = s.num("params.delta_atom", 0.0);
    cfg.sys.omega_pump = s.num("params.omega_pump", 2.0);
    cfg.sys.gamma = s.num("params.gamma", 1.0);
    cfg.sys.kappa_a = s.num("params.kappa_a", 10.0);
    cfg.sys.kappa_b = s.num("params.kappa_b", 1.0);

    cfg.eff.g = cfg.sys.g;
    cfg.eff.omega_pump = cfg.sys.omega_pump;
    cfg.eff.delta_a = s.num("params.delta_a", 0.0);
    cfg.eff.delta_b = s.num("params.delta_b", 0.0);
    cfg.eff.delta = s.num("params.delta", 0.0);
    cfg.lock_delta_b_to_delta_a = s.boolean("params.lock_delta_b_to_delta_a", false);
    if (cfg.lock_delta_b_to_delta_a) cfg.eff.delta_b = cfg.eff.delta_a;

    if (cfg.sys.g < 0.0) throw ConfigError("params.g: must be >= 0");
    if (cfg.sys.gamma < 0.0) throw ConfigError("params.gamma: must be >= 0");
    if (cfg.sys.kappa_a < 0.0) throw ConfigError("params.kappa_a: must be >= 0");
    if (cfg.sys.kappa_b < 0.0) throw ConfigError("params.kappa_b: must be >= 0");

    const int default_trunc = (cfg.model == ModelKind::full) ? 12 : 5;
    cfg.n_a_max = s.integer("truncation.n_a_max", default_trunc);
    cfg.n_b_max = s.integer("truncation.n_b_max", default_trunc);
    if (cfg.n_a_max < 1) throw ConfigError("truncation.n_a_max: must be >= 1");
    if (cfg.n_b_max < 1) throw ConfigError("truncation.n_b_max: must be >= 1");
    cfg.tail_warn = s.num("truncation.tail_warn", 1e-6);
    cfg.tail_error = s.num("truncation.tail_error", 1e-3);
    if (!(cfg.tail_warn > 0.0) || !(cfg.tail_error > cfg.tail_warn)) {
        throw ConfigError("truncation.tail_error: must exceed truncation.tail_warn > 0");
    }

    const std::string init_kind = s.str("initial.kind", "vacuum_excited");
    if (init_kind == "vacuum_excited") {
        cfg.initial = InitialState{};
    } else if (init_kind == "explicit") {
        cfg.initial.vacuum_excited = false;
        cfg.initial.n_a = s.integer("initial.n_a", 0);
        cfg.initial.n_b = s.integer("initial.n_b", 0);
        const std::string spin = s.str("initial.spin", "e");
        if (spin == "g") {
            cfg.initial.s = SpinState::g;
        } else if (spin == "e") {
            cfg.initial.s = SpinState::e;
        } else {
            throw ConfigError("initial.spin: expected g or e, got '" + spin + "'");
        }
        if (cfg.initial.n_a < 0 || cfg.initial.n_a > cfg.n_a_max) {
            throw ConfigError("initial.n_a: outside truncation");
        }
        if (cfg.initial.n_b < 0 || cfg.initial.n_b > cfg.n_b_max) {
            throw ConfigError("initial.n_b: outside truncation");
        }
    } else {
        throw ConfigError("initial.kind: expected vacuum_excited or explicit, got '" + init_kind +
                          "'");
    }

    cfg.t_max = s.num("time.t_max", 1.0);
    cfg.t_points = s.integer("time.n_points", 201);
    const std::string units = s.str("time.units", "inv_gamma");
    if (units == "inv_gamma") {
        cfg.units = TimeUnits::inv_gamma;
    } else if (units == "gt_over_pi") {
        cfg.units = TimeUnits::gt_over_pi;
    } else {
        throw ConfigError("time.units: expected inv_gamma or gt_over_pi, got '" + units + "'");
    }
    if (!(cfg.t_max > 0.0)) throw ConfigError("time.t_max: must be > 0");
    if (cfg.t_points < 2) throw ConfigError("time.n_points: must be >= 2");

    if (auto axis = parse_axis(s, "sweep.axis1")) cfg.sweep.push_back(*axis);
    if (auto axis = parse_axis(s, "sweep.axis2")) {
        if (cfg.sweep.empty()) throw ConfigError("sweep.axis2 given without sweep.axis1");
        cfg.sweep.push_back(*axis);
    }
    const auto names = cfg.sweepable_names();
    for (std::size_t i = 0; i < cfg.sweep.size(); ++i) {
        const std::string& name = cfg.sweep[i].name;
        if (std::find(names.begin(), names.end(), name) == names.end()) {
            throw ConfigError("sweep.axis" + std::to_string(i + 1) + ".name: unknown parameter '" +
                              name + "' for model '" + model_name(cfg.model) + "'");
        }
    }

    cfg.wigner_x_max = s.num("wigner.x_max", 3.0);
    cfg.wigner_points = s.integer("wigner.n_points", 101);
    if (!(cfg.wigner_x_max > 0.0)) throw ConfigError("wigner.x_max: must be > 0");
    if (cfg.wigner_points < 2) throw ConfigError("wigner.n_points: must be >= 2");
    const std::string source = s.str("wigner.source", "steady");
    if (source == "steady") {
        cfg.wigner_source = WignerSource::steady;
    } else if (source == "snapshot") {
        cfg.wigner_source = WignerSource::snapshot;
        if (!s.has("wigner.snapshot_time")) {
            throw ConfigError("wigner.snapshot_time: required when wigner.source = snapshot");
        }
        cfg.wigner_snapshot_time = s.num("wigner.snapshot_time", 0.0);
        if (!(cfg.wigner_snapshot_time > 0.0)) {
            throw ConfigError("wigner.snapshot_time: must be > 0");
        }
    } else {
        throw ConfigError("wigner.source: expected steady or snapshot, got '" + source + "'");
    }

    cfg.g2tau_max = s.num("g2tau.tau_max", 0.0);
    cfg.g2tau_points = s.integer("g2tau.n_points", 200);
    if (cfg.g2tau_max < 0.0) throw ConfigError("g2tau.tau_max: must be >= 0 (0 = auto)");
    if (cfg.g2tau_points < 2) throw ConfigError("g2tau.n_points: must be >= 2");

    cfg.spectrum_n_max = s.integer("spectrum.n_max", 3);
    if (cfg.spectrum_n_max < 1) throw ConfigError("spectrum.n_max: must be >= 1");
    cfg.spectrum_delta_from_params =
        !s.has("spectrum.delta_min") && !s.has("spectrum.delta_max");
    cfg.spectrum_delta_min = s.num("spectrum.delta_min", cfg.eff.delta);
    cfg.spectrum_delta_max = s.num("spectrum.delta_max", cfg.spectrum_delta_min);
    cfg.spectrum_delta_points = s.integer("spectrum.delta_points", 1);
    if (cfg.spectrum_delta_points < 1) throw ConfigError("spectrum.delta_points: must be >= 1");
    if (cfg.spectrum_delta_points > 1 && !(cfg.spectrum_delta_max > cfg.spectrum_delta_min)) {
        throw ConfigError("spectrum.delta_max: must exceed spectrum.delta_min for a range");
    }

    const std::string method = s.str("solver.method", "adaptive");
    if (method == "adaptive") {
        cfg.method = StepMethod::adaptive_rk45;
    } else if (method == "rk4") {
        cfg.method = StepMethod::fixed_rk4;
    } else {
        throw ConfigError("solver.method: expected adaptive or rk4, got '" + method + "'");
    }
    cfg.rel_tol = s.num("solver.rel_tol", 1e-8);
    cfg.abs_tol = s.num("solver.abs_tol", 1e-10);
    cfg.max_step = s.num("solver.max_step", 0.0);
    cfg.fixed_step = s.num("solver.fixed_step", 0.0);
    if (!(cfg.rel_tol > 0.0)) throw ConfigError("solver.rel_tol: must be > 0");
    if (!(cfg.abs_tol > 0.0)) throw ConfigError("solver.abs_tol: must be > 0");
    if (cfg.max_step < 0.0) throw ConfigError("solver.max_step: must be >= 0 (0 = unbounded)");
    if (cfg.method == StepMethod::fixed_rk4 && !(cfg.fixed_step > 0.0)) {
        throw ConfigError("solver.fixed_step: required > 0 when solver.method = rk4");
    }

    cfg.kappa_b_on_cavity = s.boolean("collapse.kappa_b_on_cavity", false);
    cfg.dist_output = s.boolean("output.distributions", false);
    cfg.output_dir = s.str("output.dir", "trilind_out");

    return cfg;
}

} // namespace

std::vector<std::pair<std::string, std::string>> RunConfig::flatten() const {
    std::vector<std::pair<std::string, std::string>> out;
    auto add = [&](const std::string& k, const std::string& v) { out.emplace_back(k, v); };
    auto add_num = [&](const std::string& k, double v) { add(k, format_double(v)); };
    auto add_int = [&](const std::string& k, int v) { add(k, std::to_string(v)); };
    auto add_bool = [&](const std::string& k, bool v) { add(k, v ? "true" : "false"); };

    add("model", model_name(model));
    add("task", task_name(task));
    add_num("params.g", sys.g);
    if (model == ModelKind::full) {
        add_num("params.omega_b", sys.omega_b);
        add_num("params.delta_c", sys.delta_c);
        add_num("params.delta_atom", sys.delta_atom);
    } else {
        add_num("params.delta_a", eff.delta_a);
        add_num("params.delta_b", eff.delta_b);
        add_num("params.delta", eff.delta);
        add_bool("params.lock_delta_b_to_delta_a", lock_delta_b_to_delta_a);
    }
    add_num("params.omega_pump", sys.omega_pump);
    add_num("params.gamma", sys.gamma);
    add_num("params.kappa_a", sys.kappa_a);
    add_num("params.kappa_b", sys.kappa_b);
    add_int("truncation.n_a_max", n_a_max);
    add_int("truncation.n_b_max", n_b_max);
    add_num("truncation.tail_warn", tail_warn);
    add_num("truncation.tail_error", tail_error);
    add("initial.kind", initial.vacuum_excited ? "vacuum_excited" : "explicit");
    if (!initial.vacuum_excited) {
        add_int("initial.n_a", initial.n_a);
        add_int("initial.n_b", initial.n_b);
        add("initial.spin", initial.s == SpinState::g ? "g" : "e");
    }
    if (task == TaskKind::dynamics || task == TaskKind::wigner) {
        add_num("time.t_max", t_max);
        add_int("time.n_points", t_points);
        add("time.units", units == TimeUnits::inv_gamma ? "inv_gamma" : "gt_over_pi");
    }
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        const std::string prefix = "sweep.axis" + std::to_string(i + 1);
        add(prefix + ".name", sweep[i].name);
        add_num(prefix + ".min", sweep[i].min);
        add_num(prefix + ".max", sweep[i].max);
        add_int(prefix + ".points", sweep[i].points);
    }
    if (task == TaskKind::wigner) {
        add_num("wigner.x_max", wigner_x_max);
        add_int("wigner.n_points", wigner_points);
        add("wigner.source", wigner_source == WignerSource::steady ? "steady" : "snapshot");
        if (wigner_source == WignerSource::snapshot) {
            add_num("wigner.snapshot_time", wigner_snapshot_time);
        }
    }
    if (task == TaskKind::g2tau) {
        add_num("g2tau.tau_max", g2tau_max);
        add_int("g2tau.n_points", g2tau_points);
    }
    if (task == TaskKind::spectrum) {
        add_int("spectrum.n_max", spectrum_n_max);
        add_num("spectrum.delta_min", spectrum_delta_min);
        add_num("spectrum.delta_max", spectrum_delta_max);
        add_int("spectrum.delta_points", spectrum_delta_points);
    }
    add("solver.method", method == StepMethod::adaptive_rk45 ? "adaptive" : "rk4");
    add_num("solver.rel_tol", rel_tol);
    add_num("solver.abs_tol", abs_tol);
    add_num("solver.max_step", max_step);
    if (method == StepMethod::fixed_rk4) add_num("solver.fixed_step", fixed_step);
    add_bool("collapse.kappa_b_on_cavity", kappa_b_on_cavity);
    add_bool("output.distributions", dist_output);
    add("output.dir", output_dir);
    return out;
}

std::vector<std::pair<std::string, RunConfig>> parse_runs(const std::string& raw) {
    const auto first = raw.find_first_not_of(" \t\r\n");
    const bool is_json = (first != std::string::npos && raw[first] == '{');
    const std::vector<RawRun> raw_runs = is_json ? parse_json(raw) : parse_text(raw);

    std::vector<std::pair<std::string, RunConfig>> out;
    out.reserve(raw_runs.size());
    for (const auto& r : raw_runs) {
        try {
            out.emplace_back(r.label, build_config(r.entries));
        } catch (const ConfigError& e) {
            if (r.label.empty()) throw;
            throw ConfigError("[run " + r.label + "] " + e.what());
        }
    }
    return out;
}

RunConfig validate_config(const std::string& raw) {
    const auto runs = parse_runs(raw);
    if (runs.size() != 1) {
        throw ConfigError("expected a single-run config, found " + std::to_string(runs.size()) +
                          " run sections");
    }
    return runs.front().second;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace trilind
