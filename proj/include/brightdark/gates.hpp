// gates.hpp - Dispersive controlled-phase gate and single-qubit rotations.
//
// Atom qubit {g1, g2} (levels 0 and 1 of a three-level emitter), mode qubit
// {psi^1_0 (dark), psi^1_1 (bright)} of two cavity modes.

#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "brightdark/collective.hpp"
#include "brightdark/dynamics.hpp"
#include "brightdark/fock.hpp"

namespace brightdark {

/// Wrap an angle into (-pi, pi].
inline double wrap_phase(double x) {
    double y = std::remainder(x, 2.0 * std::numbers::pi);
    if (y <= -std::numbers::pi) y += 2.0 * std::numbers::pi;
    return y;
}

struct GateParams {
    static constexpr double kMinDetuningRatio = 10.0;

    double g = 1.0;
    double detuning = 50.0;
    double time = 0.0;

    GateParams() = default;
    GateParams(double g_, double detuning_, double time_) : g(g_), detuning(detuning_), time(time_) { validate(); }

    /// Interaction time giving conditional phase xi: t = xi Delta / (2 g^2).
    static GateParams from_xi(double g, double detuning, double xi) {
        if (g <= 0.0) throw std::invalid_argument("GateParams: g must be positive");
        return GateParams(g, detuning, xi * detuning / (2.0 * g * g));
    }

    double xi() const { return 2.0 * g * g * time / detuning; }
    double theta() const { return g * g * time / detuning; }
    double ratio() const { return detuning / g; }

    void validate() const {
        if (detuning == 0.0) throw std::invalid_argument("GateParams: detuning must be non-zero");
        if (g <= 0.0) throw std::invalid_argument("GateParams: g must be positive");
        if (time < 0.0) throw std::invalid_argument("GateParams: interaction time must be non-negative");
    }

    std::vector<std::string> warnings() const {
        std::vector<std::string> out;
        if (std::abs(ratio()) < kMinDetuningRatio)
            out.push_back("detuning ratio |Delta/g| = " + std::to_string(std::abs(ratio())) +
                          " is below 10; the dispersive approximation is unreliable");
        return out;
    }
};

/// Configuration used by the gate: two modes, one photon per mode, three-level atom.
inline HilbertConfig gate_config() { return HilbertConfig(2, 1, 3); }

inline void require_lambda_atom(const HilbertConfig& config, const char* where) {
    if (config.atom_levels() != 3) throw std::invalid_argument(std::string(where) + ": three-level atom required");
}

/// H_eff = (g^2/Delta) (sum_j a_j^dagger)(sum_j a_j) |g1><g1|.
inline LinearOperator effective_cphase(const HilbertConfig& config, const GateParams& params) {
    require_lambda_atom(config, "effective_cphase");
    params.validate();
    LinearOperator sum = annihilator(config, 0);
    for (int k = 1; k < config.mode_count(); ++k) sum = sum + annihilator(config, k);
    const LinearOperator h = (params.g * params.g / params.detuning) * (sum.adjoint() * sum) *
                             atom_operator(config, AtomOp::ground_projector);
    return h.as_hermitian();
}

struct TruthTableEntry {
    std::string atom;   // "g1" | "g2"
    std::string mode;   // "psi10" | "psi11"
    StateVector input;
    StateVector output;
    Complex overlap;    // <input|output>
    double phase = 0.0; // arg overlap in (-pi, pi]
    double fidelity = 0.0;
};

/// Logical basis state |atom>|psi^1_n> on the gate configuration.
inline StateVector logical_state(int atom_level, int bright) {
    return with_atom(collective_state(gate_config().field_only(), 1, bright), 3, atom_level);
}

/// Evolve the four logical inputs under exp(-i H_eff t). Order:
/// g2 psi10, g2 psi11, g1 psi10, g1 psi11.
inline std::vector<TruthTableEntry> cphase_truth_table(const GateParams& params) {
    const HilbertConfig config = gate_config();
    const UnitaryPropagator propagator(effective_cphase(config, params));
    std::vector<TruthTableEntry> table;
    for (int level : {1, 0}) {
        for (int bright : {0, 1}) {
            const StateVector in = logical_state(level, bright);
            StateVector out = propagator.evolve(in, params.time);
            const Complex overlap = inner(in, out);
            table.push_back(TruthTableEntry{level == 0 ? "g1" : "g2", bright == 1 ? "psi11" : "psi10", in, out, overlap,
                                            wrap_phase(std::arg(overlap)), std::norm(overlap)});
        }
    }
    return table;
}

/// 4x4 matrix <in_i|out_j> of the truth table, in table order.
inline Eigen::Matrix4cd logical_matrix(const std::vector<TruthTableEntry>& table) {
    if (table.size() != 4) throw std::invalid_argument("logical_matrix: need four entries");
    Eigen::Matrix4cd m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            m(i, j) = inner(table[static_cast<std::size_t>(i)].input, table[static_cast<std::size_t>(j)].output);
    return m;
}

/// Multiply each component by e^{-i phase m_mode}.
inline StateVector mode_phase(const StateVector& state, int mode, double phase) {
    const HilbertConfig& config = state.config();
    require_mode(config, mode, "mode_phase");
    CVector out = state.amplitudes();
    for (std::size_t i = 0; i < config.dimension(); ++i)
        out(static_cast<Eigen::Index>(i)) *= std::exp(-kI * (phase * config.count(i, mode)));
    return StateVector(config, std::move(out), state.leakage());
}

/// Bright/dark rotation psi^1_1 -> e^{-i theta}(cos theta psi^1_1 - i sin theta psi^1_0),
/// realized as the phase e^{-2 i theta n_B} on mode B. Acting on mode A instead
/// flips the sign of the dark component.
inline StateVector mode_rotation(const StateVector& state, double theta) {
    const HilbertConfig& config = state.config();
    if (config.mode_count() != 2) throw std::invalid_argument("mode_rotation: two-mode configuration required");
    double outside = 0.0;
    for (std::size_t i = 0; i < config.dimension(); ++i)
        if (config.total_photons(i) != 1) outside += std::norm(state.amplitude(i));
    if (outside > 1e-12)
        throw std::invalid_argument("mode_rotation: input has weight " + std::to_string(outside) +
                                    " outside the single-photon sector");
    return mode_phase(state, 1, 2.0 * theta);
}

/// H_at = (Omega/2)(|g1><g2| + |g2><g1|).
inline LinearOperator raman_hamiltonian(const HilbertConfig& config, double omega) {
    require_lambda_atom(config, "raman_hamiltonian");
    const LinearOperator flip = atom_operator(config, AtomOp::g1_from_g2);
    return (0.5 * omega * (flip + flip.adjoint())).as_hermitian();
}

inline StateVector raman_rotation(const StateVector& state, double omega, double t) {
    return evolve_unitary(raman_hamiltonian(state.config(), omega), state, t);
}

/// Full detuned model versus the effective gate at one detuning.
struct DispersiveCheck {
    double delta_over_g = 0.0;
    double gate_time = 0.0;
    double target_phase = 0.0;
    double phase = 0.0;             // arg <g1 psi11 | U | g1 psi11>
    double phase_error = 0.0;       // wrapped phase - target
    double peak_leakage = 0.0;      // max sigma_ee over the gate
    double final_leakage = 0.0;     // sigma_ee at the gate time
    double leakage_bound = 0.0;     // 4 (g sqrt2 / Delta)^2
    double dark_fidelity = 0.0;     // |<g1 psi10 | U | g1 psi10>|^2
    std::vector<std::string> warnings;
};

/// Evolve |g1>|psi^1_1> under g sum_j (a_j sigma+ + h.c.) - Delta sigma_ee
/// (cavity at omega_0 + Delta) for the gate time of `params`. Peak leakage is
/// sampled `samples_per_period` times per generalized Rabi period.
inline DispersiveCheck validate_effective(const GateParams& params, int samples_per_period = 32) {
    params.validate();
    if (samples_per_period < 4) throw std::invalid_argument("validate_effective: need at least 4 samples per period");
    const HilbertConfig config = gate_config();
    SystemParams full;
    full.g = params.g;
    full.detuning = -params.detuning;
    full.mode_count = 2;
    const UnitaryPropagator propagator(hamiltonian(config, full));
    const LinearOperator excited = atom_operator(config, AtomOp::excited_projector);

    DispersiveCheck check;
    check.delta_over_g = params.ratio();
    check.gate_time = params.time;
    check.target_phase = wrap_phase(-params.xi());
    check.leakage_bound = 4.0 * 2.0 * params.g * params.g / (params.detuning * params.detuning);
    check.warnings = params.warnings();

    const StateVector bright = logical_state(0, 1);
    const double rabi = std::sqrt(params.detuning * params.detuning + 8.0 * params.g * params.g);
    const double dt = 2.0 * std::numbers::pi / rabi / samples_per_period;
    const auto samples = static_cast<long>(std::ceil(params.time / dt));
    for (long k = 1; k < samples; ++k) {
        const double p = expectation(propagator.evolve(bright, k * dt), excited).real();
        check.peak_leakage = std::max(check.peak_leakage, p);
    }
    const StateVector out = propagator.evolve(bright, params.time);
    check.final_leakage = expectation(out, excited).real();
    check.peak_leakage = std::max(check.peak_leakage, check.final_leakage);
    check.phase = wrap_phase(std::arg(inner(bright, out)));
    check.phase_error = wrap_phase(check.phase - check.target_phase);

    const StateVector dark = logical_state(0, 0);
    check.dark_fidelity = fidelity(dark, propagator.evolve(dark, params.time));
    return check;
}

/// validate_effective at two detuning ratios for the same xi.
struct ScalingReport {
    double xi = 0.0;
    DispersiveCheck first;
    DispersiveCheck second;
    double leakage_ratio = 0.0;      // second.peak / first.peak
    double expected_ratio = 0.0;     // (first ratio / second ratio)^2
    double phase_error_ratio = 0.0;

    /// Leakage ratio within `factor` of the (g/Delta)^2 prediction.
    bool scales(double factor = 1.5) const {
        return leakage_ratio <= expected_ratio * factor && leakage_ratio >= expected_ratio / factor;
    }
};

inline ScalingReport validate_scaling(double g, double xi, double first_ratio, double second_ratio,
                                      int samples_per_period = 32) {
    ScalingReport report;
    report.xi = xi;
    report.first = validate_effective(GateParams::from_xi(g, first_ratio * g, xi), samples_per_period);
    report.second = validate_effective(GateParams::from_xi(g, second_ratio * g, xi), samples_per_period);
    report.leakage_ratio = report.second.peak_leakage / report.first.peak_leakage;
    report.expected_ratio = (first_ratio / second_ratio) * (first_ratio / second_ratio);
    report.phase_error_ratio = report.first.phase_error == 0.0
                                   ? 0.0
                                   : std::abs(report.second.phase_error / report.first.phase_error);
    return report;
}

}  // namespace brightdark
