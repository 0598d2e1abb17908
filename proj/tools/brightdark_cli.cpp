// brightdark - command-line front end.
//
//   brightdark decompose --state upsilon --cutoff 8
//   brightdark mzi-scan  --state upsilon --steps 101
//   brightdark evolve    --state "coherent:0.7071,0;-0.7071,0" --atom g
//   brightdark gate      --xi pi --delta-over-g 50
//
// Exit codes: 0 ok, 2 usage or bad input, 3 truncation leakage above
// tolerance, 4 numerical failure.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "brightdark/collective.hpp"
#include "brightdark/dynamics.hpp"
#include "brightdark/gates.hpp"
#include "brightdark/interferometer.hpp"
#include "brightdark/io.hpp"
#include "brightdark/states.hpp"

namespace bd = brightdark;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitLeakage = 3;
constexpr int kExitNumerical = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LeakageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    int cutoff = 0;  // 0: choose automatically
    std::string out;
    std::string format;
    unsigned seed = 0;  // reserved; nothing here is stochastic
    double tolerance = 1e-10;
};

struct DecomposeOptions {
    std::string state;
    std::string mixer = "default";
};

struct ScanOptions {
    std::string state;
    std::string classical;
    int steps = 101;
    std::string phi_min = "0";
    std::string phi_max = "2pi";
};

struct EvolveOptions {
    std::string state;
    std::string atom = "g";
    std::string model = "quantum";
    double g = 1.0;
    double gamma = 1.0;
    std::string kappa = "0.01";
    double detuning = 0.0;
    double t_max = 10.0;
    int samples = 201;
    std::string alpha_c = "0";
    std::string alpha_d = "0";
    bool no_convergence_check = false;
};

struct GateOptions {
    std::string xi = "pi";
    double delta_over_g = 50.0;
    double second_delta_over_g = 0.0;  // 0: twice delta_over_g
    double g = 1.0;
    std::string rotate;
    int samples_per_period = 32;
};

/// "key=value,key=value" -> map, values parsed as numbers.
std::map<std::string, double> parse_pairs(const std::string& text, const std::vector<std::string>& allowed) {
    std::map<std::string, double> out;
    for (const std::string& item : bd::detail::split(text, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("expected key=value in '" + text + "'");
        const std::string key = item.substr(0, eq);
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw UsageError("unknown key '" + key + "' in '" + text + "'");
        out[key] = bd::detail::parse_number(item.substr(eq + 1));
    }
    return out;
}

bd::Complex parse_complex(const std::string& text) {
    const auto parts = bd::detail::split(bd::detail::normalize_minus(text), ',');
    if (parts.size() == 1) return bd::detail::parse_number(parts[0]);
    if (parts.size() == 2) return {bd::detail::parse_number(parts[0]), bd::detail::parse_number(parts[1])};
    throw UsageError("bad complex number '" + text + "'");
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    for (const std::string& item : bd::detail::split(text, ',')) out.push_back(bd::detail::parse_number(item));
    if (out.empty()) throw UsageError("empty list");
    return out;
}

double coherent_norm(const bd::StateSpec& spec) {
    double total = 0.0;
    for (const auto& a : spec.amplitudes) total += std::norm(a);
    return std::sqrt(total);
}

/// Cutoff large enough that the state itself is represented within `tol`;
/// coherent tails are split evenly so the joint neglected weight stays below it.
int state_cutoff(const bd::StateSpec& spec, double tol) {
    if (spec.kind == bd::StateSpec::Kind::coherent) return std::max(1, spec.minimal_cutoff(tol / spec.mode_count()));
    return std::max(1, spec.minimal_cutoff(tol));
}

/// Per-mode cutoff holding every total-photon sector of the state. Both the
/// beam splitter and the collective basis need N <= cutoff.
int sector_cutoff(const bd::StateSpec& spec, double tol) {
    switch (spec.kind) {
        case bd::StateSpec::Kind::coherent: return std::max(1, bd::cutoff_for_coherent(coherent_norm(spec), tol));
        case bd::StateSpec::Kind::upsilon: return 2;
        default: return std::max(1, spec.minimal_cutoff(tol));
    }
}

/// Field state at the requested cutoff; a Fock-sector state that does not fit
/// is a precision error rather than a usage error.
bd::StateVector field_state(const bd::StateSpec& spec, int cutoff) {
    if (spec.kind != bd::StateSpec::Kind::coherent && cutoff < spec.minimal_cutoff())
        throw LeakageError("cutoff " + std::to_string(cutoff) + " cannot represent '" + spec.text + "'");
    return bd::make_state(bd::HilbertConfig(spec.mode_count(), cutoff), spec);
}

json common_json(const Common& c, int cutoff_used) {
    return json{{"cutoff_requested", c.cutoff},
                {"cutoff", cutoff_used},
                {"format", c.format},
                {"seed", c.seed},
                {"tolerance", c.tolerance}};
}

/// Body to --out (sidecar alongside) or to stdout (sidecar to stderr).
void emit(const Common& c, const std::string& body, const json& sidecar) {
    const std::string side = sidecar.dump(2) + "\n";
    if (c.out.empty()) {
        std::cout << body;
        std::cerr << side;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + c.out + "'");
    f << body;
    std::ofstream p(c.out + ".params.json", std::ios::binary);
    if (!p) throw UsageError("cannot write '" + c.out + ".params.json'");
    p << side;
}

/// Copy of `c` with the format defaulted and checked against `allowed`.
Common resolve_format(Common c, std::initializer_list<const char*> allowed) {
    if (c.format.empty()) c.format = *allowed.begin();
    for (const char* a : allowed)
        if (c.format == a) return c;
    throw UsageError("unsupported --format '" + c.format + "' for this command");
}

int run_decompose(const Common& common, const DecomposeOptions& o, json sidecar) {
    const Common c = resolve_format(common, {"json", "csv"});
    const std::string& format = c.format;
    const bd::StateSpec spec = bd::parse_state_spec(o.state);
    const int cutoff = c.cutoff > 0 ? c.cutoff : sector_cutoff(spec, c.tolerance);
    const bd::StateVector state = field_state(spec, cutoff);
    bd::OrthogonalMixer mixer = bd::default_mixer(spec.mode_count());
    if (o.mixer == "sylvester") mixer = bd::build_mixer(spec.mode_count(), bd::MixerKind::sylvester);
    else if (o.mixer == "helmert") mixer = bd::build_mixer(spec.mode_count(), bd::MixerKind::helmert);
    else if (o.mixer != "default") throw UsageError("unknown mixer '" + o.mixer + "'");
    const bd::CollectiveDecomposition d = bd::decompose(state, mixer);

    sidecar.update(common_json(c, cutoff));
    sidecar["state"] = spec.text;
    sidecar["mixer"] = {{"kind", bd::to_string(mixer.kind())}, {"row_signs", mixer.row_signs()}};
    const double leakage = std::max(state.leakage(), d.residual);
    sidecar["leakage"] = leakage;
    std::ostringstream body;
    if (format == "json") {
        body << bd::io::to_json(d).dump(2) << '\n';
    } else {
        body << 'N';
        for (int j = 1; j <= spec.mode_count(); ++j) body << ",n" << j;
        body << ",re,im\n";
        for (const auto& e : d.entries) {
            body << e.index.total();
            for (int n : e.index.occupations) body << ',' << n;
            body << ',' << bd::io::format_double(e.amplitude.real()) << ','
                 << bd::io::format_double(e.amplitude.imag()) << '\n';
        }
        sidecar["summary"] = bd::io::to_json(d);
        sidecar["summary"].erase("entries");
    }
    emit(c, body.str(), sidecar);
    if (leakage > c.tolerance)
        throw LeakageError("truncation leakage " + std::to_string(leakage) + " exceeds tolerance");
    return 0;
}

int run_scan(const Common& common, const ScanOptions& o, json sidecar) {
    const Common c = resolve_format(common, {"csv", "json"});
    const std::string& format = c.format;
    if (o.state.empty() == o.classical.empty()) throw UsageError("give exactly one of --state or --classical");
    if (o.steps < 1) throw UsageError("--steps must be positive");
    const double lo = bd::detail::parse_number(o.phi_min);
    const double hi = bd::detail::parse_number(o.phi_max);
    const std::vector<double> grid = bd::linear_grid(lo, hi, o.steps);
    bd::FringeScan scan;
    int cutoff = 0;
    if (!o.classical.empty()) {
        const auto kv = parse_pairs(o.classical, {"theta", "intensity"});
        const double theta = kv.count("theta") ? kv.at("theta") : 0.0;
        const double intensity = kv.count("intensity") ? kv.at("intensity") : 1.0;
        if (intensity < 0.0) throw UsageError("intensity must be non-negative");
        scan = bd::fringe_scan(bd::ClassicalField::from_phase(theta, intensity), grid);
        sidecar["classical"] = {{"theta", theta}, {"intensity", intensity}};
    } else {
        const bd::StateSpec spec = bd::parse_state_spec(o.state);
        if (spec.mode_count() != 2) throw UsageError("mzi-scan needs a two-mode state");
        cutoff = c.cutoff > 0 ? c.cutoff : sector_cutoff(spec, c.tolerance);
        scan = bd::fringe_scan(field_state(spec, cutoff), grid);
        sidecar["state"] = spec.text;
    }
    sidecar.update(common_json(c, cutoff));
    sidecar["steps"] = o.steps;
    sidecar["phi_min"] = lo;
    sidecar["phi_max"] = hi;
    sidecar["fringe"] = bd::io::to_json(scan);
    std::ostringstream body;
    if (format == "csv") {
        bd::io::write_fringe_csv(body, scan);
    } else {
        json j = bd::io::to_json(scan);
        j["phi"] = scan.phi;
        j["nA"] = scan.n_a;
        j["nB"] = scan.n_b;
        body << j.dump(2) << '\n';
    }
    emit(c, body.str(), sidecar);
    if (scan.leakage > c.tolerance)
        throw LeakageError("truncation leakage " + std::to_string(scan.leakage) + " exceeds tolerance");
    return 0;
}

int run_evolve(const Common& common, const EvolveOptions& o, json sidecar) {
    const Common c = resolve_format(common, {"csv", "json"});
    const std::string& format = c.format;
    if (o.atom != "g" && o.atom != "e") throw UsageError("--atom must be g or e");
    if (o.samples < 2) throw UsageError("--samples must be at least 2");
    if (!(o.t_max > 0.0)) throw UsageError("--t-max must be positive");
    bd::SystemParams params;
    params.g = o.g;
    params.gamma = o.gamma;
    params.kappa = parse_list(o.kappa);
    params.detuning = o.detuning;
    params.mode_count = 2;
    const std::vector<double> times = bd::linear_grid(0.0, o.t_max, o.samples);
    const int level = o.atom == "e" ? 1 : 0;

    bd::TimeSeries series;
    json diagnostics;
    int cutoff = 0;
    double leakage = 0.0;
    if (o.model == "semiclassical") {
        bd::Complex alpha_c = parse_complex(o.alpha_c);
        bd::Complex alpha_d = parse_complex(o.alpha_d);
        if (!o.state.empty()) {
            const bd::StateSpec spec = bd::parse_state_spec(o.state);
            if (spec.kind != bd::StateSpec::Kind::coherent || spec.amplitudes.size() != 2)
                throw UsageError("semiclassical model takes a two-mode coherent --state");
            alpha_c = (spec.amplitudes[0] + spec.amplitudes[1]) / std::numbers::sqrt2;
            alpha_d = (-spec.amplitudes[0] + spec.amplitudes[1]) / std::numbers::sqrt2;
            sidecar["state"] = spec.text;
        }
        const bd::AtomBloch atom = level == 1 ? bd::AtomBloch::excited() : bd::AtomBloch::ground();
        series = bd::semiclassical_evolve(params, alpha_c, atom, times, alpha_d);
        sidecar["alpha_c"] = {alpha_c.real(), alpha_c.imag()};
        sidecar["alpha_d"] = {alpha_d.real(), alpha_d.imag()};
    } else if (o.model == "quantum") {
        if (o.state.empty()) throw UsageError("quantum model needs --state");
        const bd::StateSpec spec = bd::parse_state_spec(o.state);
        if (spec.mode_count() != 2) throw UsageError("evolve needs a two-mode state");
        cutoff = c.cutoff > 0 ? c.cutoff : state_cutoff(spec, c.tolerance);
        const bd::StateVector psi = bd::with_atom(field_state(spec, cutoff), 2, level);
        leakage = psi.leakage();
        bd::LindbladOptions options;
        options.check_convergence = !o.no_convergence_check;
        const bd::LindbladRun run = bd::lindblad_run(psi.config(), params, bd::DensityOperator::from_pure(psi), times,
                                                     bd::two_mode_mixer(), options);
        series = run.series;
        diagnostics = {{"step", run.step},
                       {"convergence_drift", run.convergence_drift},
                       {"max_trace_error", run.max_trace_error},
                       {"min_eigenvalue", run.min_eigenvalue}};
        sidecar["state"] = spec.text;
        sidecar["leakage"] = leakage;
    } else {
        throw UsageError("--model must be quantum or semiclassical");
    }
    sidecar.update(common_json(c, cutoff));
    sidecar["model"] = o.model;
    sidecar["atom"] = o.atom;
    sidecar["params"] = bd::io::to_json(params);
    sidecar["t_max"] = o.t_max;
    sidecar["samples"] = o.samples;
    sidecar["convergence_check"] = !o.no_convergence_check;
    if (!diagnostics.is_null()) sidecar["diagnostics"] = diagnostics;

    std::ostringstream body;
    if (format == "csv") {
        bd::io::write_timeseries_csv(body, series);
    } else {
        json j{{"t", series.times()}};
        for (const std::string& name : series.names()) j[name] = series.channel(name);
        body << j.dump(2) << '\n';
    }
    emit(c, body.str(), sidecar);
    if (leakage > c.tolerance)
        throw LeakageError("truncation leakage " + std::to_string(leakage) + " exceeds tolerance");
    return 0;
}

int run_gate(const Common& common, const GateOptions& o, json sidecar) {
    const Common c = resolve_format(common, {"json"});
    if (!(o.g > 0.0)) throw UsageError("--g must be positive");
    json report;
    if (!o.rotate.empty()) {
        const double theta = parse_pairs(o.rotate, {"theta"}).at("theta");
        const bd::HilbertConfig config(2, 1);
        const bd::StateVector bright = bd::collective_state(config, 1, 1);
        const bd::StateVector dark = bd::collective_state(config, 1, 0);
        const bd::StateVector out = bd::mode_rotation(bright, theta);
        report["rotation"] = {{"theta", theta},
                              {"input", "psi11"},
                              {"bright_weight", std::norm(bd::inner(bright, out))},
                              {"dark_weight", std::norm(bd::inner(dark, out))},
                              {"dark_fidelity", bd::fidelity(dark, out)}};
    } else {
        const double xi = bd::detail::parse_number(o.xi);
        const bd::GateParams params = bd::GateParams::from_xi(o.g, o.delta_over_g * o.g, xi);
        report["params"] = bd::io::to_json(params);
        report["truth_table"] = bd::io::to_json(bd::cphase_truth_table(params));
        report["warnings"] = params.warnings();
        if (xi != 0.0) {
            const double second = o.second_delta_over_g > 0.0 ? o.second_delta_over_g : 2.0 * o.delta_over_g;
            report["validation"] =
                bd::io::to_json(bd::validate_scaling(o.g, xi, o.delta_over_g, second, o.samples_per_period));
        }
    }
    sidecar.update(common_json(c, 1));
    sidecar["xi"] = o.xi;
    sidecar["delta_over_g"] = o.delta_over_g;
    sidecar["second_delta_over_g"] = o.second_delta_over_g;
    sidecar["g"] = o.g;
    sidecar["rotate"] = o.rotate;
    sidecar["samples_per_period"] = o.samples_per_period;
    emit(c, report.dump(2) + "\n", sidecar);
    return 0;
}

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--cutoff", c.cutoff, "Photons per mode (0: automatic)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--out", c.out, "Output file; parameters go to <out>.params.json");
    cmd->add_option("--format", c.format, "csv or json");
    cmd->add_option("--seed", c.seed, "Reserved (no stochastic paths)");
    cmd->add_option("--tolerance", c.tolerance, "Largest acceptable truncation leakage")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bright/dark collective-mode toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "brightdark 1.0.0");

    Common common;
    DecomposeOptions dec;
    ScanOptions scan;
    EvolveOptions evo;
    GateOptions gate;

    auto* cmd_dec = app.add_subcommand("decompose", "Collective-basis decomposition of a state");
    add_common(cmd_dec, common);
    cmd_dec->add_option("--state", dec.state, "State spec")->required();
    cmd_dec->add_option("--mixer", dec.mixer, "default, sylvester or helmert");

    auto* cmd_scan = app.add_subcommand("mzi-scan", "Mach-Zehnder fringe scan");
    add_common(cmd_scan, common);
    cmd_scan->add_option("--state", scan.state, "Two-mode state spec");
    cmd_scan->add_option("--classical", scan.classical, "Classical input theta=..,intensity=..");
    cmd_scan->add_option("--steps", scan.steps, "Grid points");
    cmd_scan->add_option("--phi-min", scan.phi_min, "First phase");
    cmd_scan->add_option("--phi-max", scan.phi_max, "Last phase");

    auto* cmd_evo = app.add_subcommand("evolve", "Open-system or factorized dynamics");
    add_common(cmd_evo, common);
    cmd_evo->add_option("--state", evo.state, "Two-mode field state spec");
    cmd_evo->add_option("--atom", evo.atom, "Initial atom state g or e");
    cmd_evo->add_option("--model", evo.model, "quantum or semiclassical");
    cmd_evo->add_option("--g", evo.g, "Coupling")->check(CLI::NonNegativeNumber);
    cmd_evo->add_option("--gamma", evo.gamma, "Atomic decay rate")->check(CLI::NonNegativeNumber);
    cmd_evo->add_option("--kappa", evo.kappa, "Mode decay rate, or one per mode comma-separated");
    cmd_evo->add_option("--detuning", evo.detuning, "Coefficient of sigma_ee");
    cmd_evo->add_option("--t-max", evo.t_max, "Final time");
    cmd_evo->add_option("--samples", evo.samples, "Sample count including t = 0");
    cmd_evo->add_option("--alpha-c", evo.alpha_c, "Semiclassical bright amplitude re[,im]");
    cmd_evo->add_option("--alpha-d", evo.alpha_d, "Semiclassical dark amplitude re[,im]");
    cmd_evo->add_flag("--no-convergence-check", evo.no_convergence_check, "Skip the half-step comparison");

    auto* cmd_gate = app.add_subcommand("gate", "Dispersive controlled-phase gate report");
    add_common(cmd_gate, common);
    cmd_gate->add_option("--xi", gate.xi, "Conditional phase");
    cmd_gate->add_option("--delta-over-g", gate.delta_over_g, "Detuning ratio");
    cmd_gate->add_option("--second-delta-over-g", gate.second_delta_over_g, "Second ratio for the scaling check");
    cmd_gate->add_option("--g", gate.g, "Coupling");
    cmd_gate->add_option("--rotate", gate.rotate, "Bright/dark rotation theta=..");
    cmd_gate->add_option("--samples-per-period", gate.samples_per_period, "Leakage sampling density")
        ->check(CLI::Range(4, 100000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    json sidecar{{"command", app.get_subcommands().front()->get_name()},
                 {"argv", std::vector<std::string>(argv, argv + argc)}};
    try {
        if (cmd_dec->parsed()) return run_decompose(common, dec, sidecar);
        if (cmd_scan->parsed()) return run_scan(common, scan, sidecar);
        if (cmd_evo->parsed()) return run_evolve(common, evo, sidecar);
        if (cmd_gate->parsed()) return run_gate(common, gate, sidecar);
    } catch (const LeakageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitLeakage;
    } catch (const bd::IntegrationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::length_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}
