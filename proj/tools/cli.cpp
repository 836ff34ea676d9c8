#include "cli.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "json_writer.hpp"
#include "tju/analysis.hpp"
#include "tju/collision.hpp"

namespace tju::cli {
namespace {

using Json = nlohmann::ordered_json;

struct Flags {
    std::string config;
    std::string out;
    std::string format;
    std::string boundary;
    std::string sector;
    int order = 0;
    unsigned threads = 0;
    std::uint64_t seed = 0;
    bool has_order = false;
    bool has_threads = false;
    bool has_seed = false;
};

// ---------------------------------------------------------------- config

Json read_config(const Flags &flags) {
    if (flags.config.empty()) {
        return Json::object();
    }
    std::ifstream in(flags.config);
    if (!in) {
        throw IoError("cannot read config file '" + flags.config + "'");
    }
    Json cfg;
    try {
        cfg = Json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError("config file '" + flags.config + "' is not valid JSON: " + e.what());
    }
    if (!cfg.is_object()) {
        throw ConfigError("config file must hold a JSON object");
    }
    return cfg;
}

void reject_unknown(const Json &cfg, const std::set<std::string> &allowed,
                    const std::string &command) {
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ConfigError("unknown config key '" + it.key() + "' for " + command);
        }
    }
}

const Json *lookup(const Json &cfg, const char *key) {
    const auto it = cfg.find(key);
    return it == cfg.end() ? nullptr : &*it;
}

[[noreturn]] void wrong_type(const char *key, const char *expected) {
    throw ConfigError(std::string("config key '") + key + "' must be " + expected);
}

double get_double(const Json &cfg, const char *key, double fallback) {
    const Json *v = lookup(cfg, key);
    if (!v) {
        return fallback;
    }
    if (!v->is_number()) {
        wrong_type(key, "a number");
    }
    return v->get<double>();
}

int get_int(const Json &cfg, const char *key, int fallback) {
    const Json *v = lookup(cfg, key);
    if (!v) {
        return fallback;
    }
    if (!v->is_number_integer()) {
        wrong_type(key, "an integer");
    }
    return v->get<int>();
}

bool get_bool(const Json &cfg, const char *key, bool fallback) {
    const Json *v = lookup(cfg, key);
    if (!v) {
        return fallback;
    }
    if (!v->is_boolean()) {
        wrong_type(key, "a boolean");
    }
    return v->get<bool>();
}

std::string get_string(const Json &cfg, const char *key, const std::string &fallback) {
    const Json *v = lookup(cfg, key);
    if (!v) {
        return fallback;
    }
    if (!v->is_string()) {
        wrong_type(key, "a string");
    }
    return v->get<std::string>();
}

template <class T, class Check>
std::vector<T> get_list(const Json &cfg, const char *key, std::vector<T> fallback, Check check,
                        const char *expected) {
    const Json *v = lookup(cfg, key);
    if (!v) {
        return fallback;
    }
    if (!v->is_array() || v->empty()) {
        wrong_type(key, expected);
    }
    std::vector<T> out;
    for (const auto &item : *v) {
        if (!check(item)) {
            wrong_type(key, expected);
        }
        out.push_back(item.template get<T>());
    }
    return out;
}

std::vector<double> get_doubles(const Json &cfg, const char *key, std::vector<double> fallback) {
    return get_list<double>(
        cfg, key, std::move(fallback), [](const Json &j) { return j.is_number(); },
        "a non-empty array of numbers");
}

std::vector<int> get_ints(const Json &cfg, const char *key, std::vector<int> fallback) {
    return get_list<int>(
        cfg, key, std::move(fallback), [](const Json &j) { return j.is_number_integer(); },
        "a non-empty array of integers");
}

std::vector<std::string> get_strings(const Json &cfg, const char *key,
                                     std::vector<std::string> fallback) {
    return get_list<std::string>(
        cfg, key, std::move(fallback), [](const Json &j) { return j.is_string(); },
        "a non-empty array of strings");
}

void require(bool ok, const std::string &message) {
    if (!ok) {
        throw ConfigError(message);
    }
}

Boundary parse_boundary(const std::string &text) {
    if (text == "open") {
        return Boundary::Open;
    }
    if (text == "periodic") {
        return Boundary::Periodic;
    }
    throw ConfigError("boundary must be 'open' or 'periodic', got '" + text + "'");
}

std::optional<SpinSector> parse_sector(const std::string &text) {
    if (text == "full") {
        return std::nullopt;
    }
    const auto comma = text.find(',');
    require(comma != std::string::npos, "sector must be 'full' or 'NUP,NDOWN', got '" + text + "'");
    SpinSector sector;
    try {
        std::size_t used = 0;
        const std::string a = text.substr(0, comma);
        const std::string b = text.substr(comma + 1);
        sector.up = std::stoi(a, &used);
        require(used == a.size(), "bad sector '" + text + "'");
        sector.down = std::stoi(b, &used);
        require(used == b.size(), "bad sector '" + text + "'");
    } catch (const std::logic_error &) {
        throw ConfigError("sector must be 'full' or 'NUP,NDOWN', got '" + text + "'");
    }
    require(sector.up >= 0 && sector.down >= 0, "sector counts must be non-negative");
    return sector;
}

// ------------------------------------------------------------ model setup

struct ModelDefaults {
    int sites = 5;
    double u_s = 10.0;
    double j = 0.3;
    double u_eff = 0.0;
    bool winding = false;
};

const std::set<std::string> model_keys = {
    "sites", "t",        "u_s",           "j",         "jx",     "jy",    "jz",
    "u_eff", "winding",  "dimension",     "boundary",  "sector", "dense", "threads"};

std::set<std::string> with_model_keys(std::initializer_list<std::string> extra) {
    std::set<std::string> keys = model_keys;
    keys.insert(extra.begin(), extra.end());
    return keys;
}

struct ModelSetup {
    ProtocolSchedule schedule;
    SweepOptions options;
    std::string sector_label = "full";
};

ModelSetup read_model(const Json &cfg, const Flags &flags, const ModelDefaults &d) {
    ModelSetup setup;
    ProtocolSchedule &s = setup.schedule;
    s.model.sites = get_int(cfg, "sites", d.sites);
    s.model.t = get_double(cfg, "t", 1.0);
    s.model.u = get_double(cfg, "u_s", d.u_s);
    s.model.set_isotropic_j(get_double(cfg, "j", d.j));
    s.model.jx = get_double(cfg, "jx", s.model.jx);
    s.model.jy = get_double(cfg, "jy", s.model.jy);
    s.model.jz = get_double(cfg, "jz", s.model.jz);
    s.effective_u = get_double(cfg, "u_eff", d.u_eff);
    s.phase_winding = get_bool(cfg, "winding", d.winding);
    s.dimension = get_int(cfg, "dimension", 1);
    s.model.boundary = parse_boundary(
        flags.boundary.empty() ? get_string(cfg, "boundary", "open") : flags.boundary);

    const std::string sector =
        flags.sector.empty() ? get_string(cfg, "sector", "full") : flags.sector;
    setup.options.sector.spin = parse_sector(sector);
    setup.options.sector.dense = get_bool(cfg, "dense", false);
    setup.sector_label = sector;
    require(!(setup.options.sector.dense && setup.options.sector.spin),
            "dense evaluation applies to the full space only");
    const int threads = get_int(cfg, "threads", 0);
    require(threads >= 0, "threads must be >= 0");
    setup.options.threads = flags.has_threads ? flags.threads : static_cast<unsigned>(threads);
    return setup;
}

void check_sector(const ModelSetup &setup, int sites) {
    if (setup.options.sector.spin) {
        (void)enumerate_basis(sites, *setup.options.sector.spin);
    }
}

std::vector<int> read_orders(const Json &cfg, const Flags &flags) {
    std::vector<int> orders = get_ints(cfg, "orders", {1, 2});
    if (flags.has_order) {
        orders = {flags.order};
    }
    for (const int o : orders) {
        require(o == 1 || o == 2, "orders must be 1 or 2");
    }
    return orders;
}

// ---------------------------------------------------------------- output

using Cell = std::variant<std::string, long long, double>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

std::string cell_text(const Cell &c) {
    if (const auto *s = std::get_if<std::string>(&c)) {
        return *s;
    }
    if (const auto *i = std::get_if<long long>(&c)) {
        return std::to_string(*i);
    }
    return format_number(std::get<double>(c));
}

std::string render(const Table &table, const std::string &format) {
    if (format == "json") {
        Json rows = Json::array();
        for (const auto &row : table.rows) {
            Json obj = Json::object();
            for (std::size_t k = 0; k < row.size(); ++k) {
                std::visit([&](const auto &v) { obj[table.header[k]] = v; }, row[k]);
            }
            rows.push_back(std::move(obj));
        }
        return to_json_text(rows);
    }
    std::string text;
    for (std::size_t k = 0; k < table.header.size(); ++k) {
        text += (k ? "," : "") + table.header[k];
    }
    text += "\n";
    for (const auto &row : table.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            text += (k ? "," : "") + cell_text(row[k]);
        }
        text += "\n";
    }
    return text;
}

void emit(const std::string &text, const Flags &flags, std::ostream &out) {
    if (flags.out.empty()) {
        out << text;
        out.flush();
        return;
    }
    std::ofstream file(flags.out, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw IoError("cannot open output file '" + flags.out + "'");
    }
    file << text;
    file.close();
    if (!file) {
        throw IoError("failed writing output file '" + flags.out + "'");
    }
}

Table sweep_table(const char *x_name, const std::vector<SweepRow> &rows, bool integer_x) {
    Table table{{x_name, "order", "bound"}, {}};
    for (const auto &r : rows) {
        Cell x = integer_x ? Cell(static_cast<long long>(std::llround(r.x))) : Cell(r.x);
        table.rows.push_back({x, static_cast<long long>(r.order), r.bound.value});
    }
    return table;
}

std::vector<double> log_grid(double lo, double hi, int points) {
    require(lo > 0.0 && hi >= lo && std::isfinite(hi), "time grid needs 0 < tau_min <= tau_max");
    require(points >= 1, "tau_points must be >= 1");
    std::vector<double> grid;
    for (int k = 0; k < points; ++k) {
        const double f = points == 1 ? 0.0 : static_cast<double>(k) / (points - 1);
        grid.push_back(lo * std::pow(hi / lo, f));
    }
    return grid;
}

std::vector<AtomSpecies> species_table(const Json &cfg) {
    const std::string file = get_string(cfg, "species_file", "");
    if (file.empty()) {
        return default_species();
    }
    try {
        return load_species(file);
    } catch (const DomainError &e) {
        throw ConfigError(e.what());
    } catch (const NumericError &) {
        throw;
    } catch (const std::runtime_error &e) {
        throw IoError(e.what());
    }
}

const AtomSpecies &pick_species(const std::vector<AtomSpecies> &table, const std::string &label) {
    try {
        return find_species(table, label);
    } catch (const std::exception &e) {
        throw ConfigError(e.what());
    }
}

// --------------------------------------------------------------- commands

int cmd_fig_shift_times(const Json &cfg, const Flags &flags, std::ostream &out) {
    reject_unknown(cfg, {"species", "species_file", "v0_min", "v0_max", "v0_step"},
                   "fig-shift-times");
    const auto table = species_table(cfg);
    std::vector<std::string> labels;
    for (const auto &sp : table) {
        labels.push_back(sp.label);
    }
    labels = get_strings(cfg, "species", labels);
    const double lo = get_double(cfg, "v0_min", 5.0);
    const double hi = get_double(cfg, "v0_max", 50.0);
    const double step = get_double(cfg, "v0_step", 1.0);
    require(lo > 0.0 && hi >= lo && step > 0.0 && std::isfinite(hi),
            "depth grid needs 0 < v0_min <= v0_max and v0_step > 0");
    const long long points = static_cast<long long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    require(points <= 1000000, "depth grid too large");
    std::vector<const AtomSpecies *> chosen;
    for (const auto &label : labels) {
        chosen.push_back(&pick_species(table, label));
    }

    Table result{{"species", "V0_over_ER", "tau_sh_seconds"}, {}};
    for (const AtomSpecies *sp : chosen) {
        for (long long k = 0; k < points; ++k) {
            const double v0 = lo + static_cast<double>(k) * step;
            result.rows.push_back({sp->label, v0, shift_time_bound(*sp, v0)});
        }
    }
    emit(render(result, flags.format), flags, out);
    return Ok;
}

int cmd_fig_time(const Json &cfg, const Flags &flags, std::ostream &out) {
    reject_unknown(cfg, with_model_keys({"orders", "taus", "tau_min", "tau_max", "tau_points", "steps"}),
                   "fig-time");
    ModelSetup setup = read_model(cfg, flags, {5, 5.0, 0.3, -2.0, true});
    const auto orders = read_orders(cfg, flags);
    const int steps = get_int(cfg, "steps", 1);
    require(steps >= 1, "steps must be >= 1");
    std::vector<double> taus = get_doubles(cfg, "taus", {});
    if (taus.empty()) {
        taus = log_grid(get_double(cfg, "tau_min", 1e-3), get_double(cfg, "tau_max", 1e2),
                        get_int(cfg, "tau_points", 31));
    }
    setup.schedule.steps = steps;
    setup.schedule.validate();
    check_sector(setup, setup.schedule.model.sites);
    const auto rows = sweep_time(setup.schedule, taus, orders, steps, setup.options);
    emit(render(sweep_table("tau", rows, false), flags.format), flags, out);
    return Ok;
}

int cmd_fig_steps(const Json &cfg, const Flags &flags, std::ostream &out) {
    reject_unknown(cfg, with_model_keys({"orders", "tau", "m_grid"}), "fig-steps");
    ModelSetup setup = read_model(cfg, flags, {5, 10.0, 0.3, 0.0, false});
    const auto orders = read_orders(cfg, flags);
    const double tau = get_double(cfg, "tau", 100.0);
    std::vector<int> grid;
    for (int m = 50; m <= 1000; m += 50) {
        grid.push_back(m);
    }
    grid = get_ints(cfg, "m_grid", grid);
    setup.schedule.total_time = tau;
    setup.schedule.validate();
    check_sector(setup, setup.schedule.model.sites);
    const auto rows = sweep_steps(setup.schedule, tau, grid, orders, setup.options);
    emit(render(sweep_table("m", rows, true), flags.format), flags, out);
    return Ok;
}

int cmd_fig_sites(const Json &cfg, const Flags &flags, std::ostream &out) {
    reject_unknown(cfg, with_model_keys({"orders", "tau", "sites_grid", "max_sites"}), "fig-sites");
    ModelSetup setup = read_model(cfg, flags, {2, 10.0, 0.3, 0.0, false});
    require(lookup(cfg, "sites") == nullptr, "fig-sites takes 'sites_grid', not 'sites'");
    const auto orders = read_orders(cfg, flags);
    const double tau = get_double(cfg, "tau", 0.01);
    const auto grid = get_ints(cfg, "sites_grid", {2, 3, 4, 5});
    setup.options.max_sites = get_int(cfg, "max_sites", 6);
    setup.schedule.total_time = tau;
    setup.schedule.validate();
    for (const int m : grid) {
        require(m >= 2, "sites_grid entries must be >= 2");
        if (m <= setup.options.max_sites) {
            check_sector(setup, m);
        }
    }
    const auto rows = sweep_sites(setup.schedule, grid, tau, orders, setup.options);
    emit(render(sweep_table("M", rows, true), flags.format), flags, out);
    return Ok;
}

int cmd_feasibility(const Json &cfg, const Flags &flags, std::ostream &out) {
    reject_unknown(cfg,
                   {"species", "species_file", "v0_over_er", "lifetime", "hopping_time",
                    "tau_step", "ramp_safety", "steps", "order", "dimension"},
                   "feasibility");
    require(flags.format == "json", "feasibility writes a JSON report; use --format json");
    const auto table = species_table(cfg);
    const AtomSpecies &sp = pick_species(table, get_string(cfg, "species", "Rb87"));
    const double v0 = get_double(cfg, "v0_over_er", 34.0);
    const double lifetime = get_double(cfg, "lifetime", 1.0);
    const double hopping_time = get_double(cfg, "hopping_time", 1e-3);
    StepTiming timing;
    timing.step_time = get_double(cfg, "tau_step", 0.2);
    timing.ramp_safety = get_double(cfg, "ramp_safety", 1.0);
    const int steps = get_int(cfg, "steps", 500);
    const int order = flags.has_order ? flags.order : get_int(cfg, "order", 2);
    const int dimension = get_int(cfg, "dimension", 1);
    require(v0 > 0.0 && std::isfinite(v0), "v0_over_er must be positive");
    require(lifetime > 0.0 && std::isfinite(lifetime), "lifetime must be positive");
    require(hopping_time > 0.0 && std::isfinite(hopping_time), "hopping_time must be positive");
    require(timing.step_time >= 0.0 && std::isfinite(timing.step_time), "tau_step must be >= 0");
    require(timing.ramp_safety > 0.0 && std::isfinite(timing.ramp_safety),
            "ramp_safety must be positive");
    require(steps >= 1, "steps must be >= 1");
    require(order == 1 || order == 2, "order must be 1 or 2");
    require(dimension >= 1 && dimension <= 3, "dimension must be 1, 2 or 3");

    timing.hopping_energy = hopping_energy_from_time(hopping_time);
    const RampWindow window = ramp_window(sp, v0, timing.hopping_energy, timing.ramp_safety);
    const StepBudget budget = step_budget(sp, v0, lifetime, order, dimension, timing);
    const ResourceCount counts = resource_count(steps, order, dimension);

    std::string status = "ok";
    if (!window.feasible) {
        status = "infeasible_ramp";
    } else if (steps > budget.steps) {
        status = "exceeds_lifetime";
    }

    Json report = Json::object();
    report["species"] = sp.label;
    report["V0_over_ER"] = v0;
    report["K"] = k_prefactor(sp, v0);
    report["omega_t"] = trap_frequency(sp, v0);
    report["tau_sh_bound"] = shift_time_bound(sp, v0);
    report["ramp_window"] = {{"min_time", window.min_time},
                             {"max_time", window.max_time},
                             {"feasible", window.feasible}};
    report["steps_budget"] = {{"lifetime", lifetime},
                              {"order", order},
                              {"steps", budget.steps},
                              {"step_duration", budget.step_duration},
                              {"shift_time", budget.shift_time},
                              {"ramp_time", budget.ramp_time},
                              {"dwell_time", budget.dwell_time}};
    report["resource_counts"] = {{"steps", steps},
                                 {"order", order},
                                 {"dimension", dimension},
                                 {"lattice_ramps", counts.lattice_ramps},
                                 {"zz_simulations", counts.zz_simulations},
                                 {"rotations", counts.rotations}};
    report["status"] = status;
    emit(to_json_text(report), flags, out);
    return Ok;
}

int cmd_evolve(const Json &cfg, const Flags &flags, std::ostream &out) {
    reject_unknown(cfg, with_model_keys({"tau", "steps", "order", "samples", "seed", "merge"}),
                   "evolve");
    ModelSetup setup = read_model(cfg, flags, {2, 10.0, 0.3, 0.0, false});
    ProtocolSchedule &s = setup.schedule;
    s.total_time = get_double(cfg, "tau", 1.0);
    s.steps = get_int(cfg, "steps", 1);
    s.order = flags.has_order ? flags.order : get_int(cfg, "order", 1);
    const int samples = get_int(cfg, "samples", 100);
    const long long seed_cfg = [&] {
        const Json *v = lookup(cfg, "seed");
        if (!v) {
            return 1LL;
        }
        if (!v->is_number_unsigned()) {
            wrong_type("seed", "a non-negative integer");
        }
        return v->get<long long>();
    }();
    const std::uint64_t seed = flags.has_seed ? flags.seed : static_cast<std::uint64_t>(seed_cfg);
    require(samples >= 1, "samples must be >= 1");
    require(s.model.sites <= 6 || setup.options.sector.spin,
            "evolve over the full space is limited to M <= 6 (4^M states); pick a --sector");
    s.validate();
    check_sector(setup, s.model.sites);

    const BoundEvaluator evaluator(s, setup.options.sector);
    const auto blocks = evaluator.propagators(s.total_time, s.steps, s.order);
    const FidelityBound bound = evaluator.bound(s.total_time, s.steps, s.order);
    const StateSampleStats stats = sample_state_antifidelity(blocks, samples, seed);
    const ModelParams target = target_model(s);

    if (flags.format == "csv") {
        Table table{{"M", "tau", "steps", "order", "bound", "squared_distance", "clamped",
                     "max_state_antifidelity", "mean_state_antifidelity"},
                    {}};
        table.rows.push_back({static_cast<long long>(s.model.sites), s.total_time,
                              static_cast<long long>(s.steps), static_cast<long long>(s.order),
                              bound.value, bound.squared_distance,
                              static_cast<long long>(bound.clamped), stats.max, stats.mean});
        emit(render(table, "csv"), flags, out);
        return Ok;
    }
    Json report = Json::object();
    report["M"] = s.model.sites;
    report["boundary"] = to_string(s.model.boundary);
    report["sector"] = setup.sector_label;
    report["dimension"] = static_cast<long long>(evaluator.dimension());
    report["tau"] = s.total_time;
    report["steps"] = s.steps;
    report["order"] = s.order;
    report["model"] = {{"t", target.t},   {"u", target.u},   {"u_s", s.model.u},
                       {"jx", target.jx}, {"jy", target.jy}, {"jz", target.jz}};
    report["bound"] = bound.value;
    report["squared_distance"] = bound.squared_distance;
    report["clamped"] = bound.clamped;
    report["state_antifidelity"] = {
        {"samples", stats.samples}, {"seed", seed}, {"max", stats.max}, {"mean", stats.mean}};
    emit(to_json_text(report), flags, out);
    return Ok;
}

void add_common(CLI::App *sub, Flags &flags) {
    sub->add_option("--config", flags.config, "JSON config file");
    sub->add_option("--out", flags.out, "Output path (default stdout)");
    sub->add_option("--format", flags.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--boundary", flags.boundary, "Chain boundary")
        ->check(CLI::IsMember({"open", "periodic"}));
    sub->add_option("--sector", flags.sector, "NUP,NDOWN or full");
    sub->add_option("--order", flags.order, "Trotter order")->check(CLI::Range(1, 2));
    sub->add_option("--threads", flags.threads, "Worker threads (0: all cores)");
    sub->add_option("--seed", flags.seed, "Seed for random state sampling");
}

void report_error(std::ostream &err, const char *kind, const std::string &message) {
    Json line = {{"error", kind}, {"message", message}};
    err << line.dump() << '\n';
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Cold-atom t-J-U simulation protocol: figure data and feasibility reports",
                 "tjusim"};
    app.require_subcommand(1);
    Flags flags;

    using Handler = std::function<int(const Json &, const Flags &, std::ostream &)>;
    struct Command {
        const char *name;
        const char *help;
        Handler handler;
        const char *default_format;
    };
    const std::vector<Command> commands = {
        {"fig-shift-times", "Lower bound on shift times vs lattice depth", cmd_fig_shift_times, "csv"},
        {"fig-time", "Anti-fidelity bound vs simulated time", cmd_fig_time, "csv"},
        {"fig-steps", "Anti-fidelity bound vs number of Trotter steps", cmd_fig_steps, "csv"},
        {"fig-sites", "Anti-fidelity bound vs chain length", cmd_fig_sites, "csv"},
        {"feasibility", "Timing budget for a species and lattice depth", cmd_feasibility, "json"},
        {"evolve", "Protocol vs exact propagator for arbitrary parameters", cmd_evolve, "json"},
    };
    std::vector<CLI::App *> subs;
    for (const auto &c : commands) {
        CLI::App *sub = app.add_subcommand(c.name, c.help);
        add_common(sub, flags);
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        for (CLI::App *sub : subs) {
            if (sub->parsed()) {
                out << sub->help();
                return Ok;
            }
        }
        out << app.help();
        return Ok;
    } catch (const CLI::ParseError &e) {
        report_error(err, "config", e.what());
        return ConfigFailure;
    }

    for (std::size_t k = 0; k < commands.size(); ++k) {
        CLI::App *sub = subs[k];
        if (!sub->parsed()) {
            continue;
        }
        flags.has_order = sub->count("--order") > 0;
        flags.has_threads = sub->count("--threads") > 0;
        flags.has_seed = sub->count("--seed") > 0;
        if (flags.format.empty()) {
            flags.format = commands[k].default_format;
        }
        try {
            const Json cfg = read_config(flags);
            if (!flags.out.empty() && !std::ofstream(flags.out, std::ios::app)) {
                throw IoError("cannot open output file '" + flags.out + "'");
            }
            return commands[k].handler(cfg, flags, out);
        } catch (const ConfigError &e) {
            report_error(err, "config", e.what());
            return ConfigFailure;
        } catch (const DomainError &e) {
            report_error(err, "config", e.what());
            return ConfigFailure;
        } catch (const IoError &e) {
            report_error(err, "io", e.what());
            return IoFailure;
        } catch (const NumericError &e) {
            report_error(err, "numeric", e.what());
            return NumericFailure;
        } catch (const std::exception &e) {
            report_error(err, "numeric", e.what());
            return NumericFailure;
        }
    }
    report_error(err, "config", "no subcommand given");
    return ConfigFailure;
}

} // namespace tju::cli
