// dynamics.hpp - Emitter/modes Hamiltonians, unitary evolution, the Lindblad
// master equation and the factorized (semiclassical) model.
//
// Times are in units of 1/g when g = 1. Rates follow the master equation
//   drho/dt = -i[H, rho] + (gamma/2) D[sigma-] rho + sum_j (kappa_j/2) D[a_j] rho,
//   D[L] rho = 2 L rho L^dagger - L^dagger L rho - rho L^dagger L,
// so a free mode population decays as e^{-kappa t}.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "brightdark/collective.hpp"
#include "brightdark/fock.hpp"

namespace brightdark {

/// Raised when an integration cannot meet its accuracy contract.
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SystemParams {
    double g = 1.0;                   // emitter-mode coupling (same for every mode)
    double gamma = 0.0;               // atomic decay rate
    std::vector<double> kappa{0.0};   // per-mode field decay; a single value applies to all modes
    double detuning = 0.0;            // coefficient of sigma_ee in H
    int mode_count = 2;

    double kappa_of(int mode) const {
        if (kappa.empty()) return 0.0;
        if (kappa.size() == 1) return kappa.front();
        if (mode < 0 || mode >= static_cast<int>(kappa.size()))
            throw std::out_of_range("SystemParams::kappa_of: mode out of range");
        return kappa[static_cast<std::size_t>(mode)];
    }
    double max_kappa() const {
        double k = 0.0;
        for (double v : kappa) k = std::max(k, v);
        return k;
    }
    void validate() const {
        if (g < 0.0 || gamma < 0.0) throw std::invalid_argument("SystemParams: rates must be non-negative");
        for (double k : kappa)
            if (k < 0.0) throw std::invalid_argument("SystemParams: rates must be non-negative");
        if (kappa.size() > 1 && static_cast<int>(kappa.size()) != mode_count)
            throw std::invalid_argument("SystemParams: need one kappa per mode");
    }
};

/// H = g sum_j (a_j sigma+ + a_j^dagger sigma-) + detuning * sigma_ee.
inline LinearOperator hamiltonian(const HilbertConfig& config, const SystemParams& params) {
    if (config.atom_levels() < 2) throw std::invalid_argument("hamiltonian: configuration needs an atom");
    const LinearOperator raise = atom_operator(config, AtomOp::raise);
    LinearOperator field = annihilator(config, 0);
    for (int k = 1; k < config.mode_count(); ++k) field = field + annihilator(config, k);
    const LinearOperator absorb = field * raise;
    LinearOperator h = params.g * (absorb + absorb.adjoint());
    if (params.detuning != 0.0) h = h + params.detuning * atom_operator(config, AtomOp::excited_projector);
    return h.as_hermitian();
}

/// e^{-iHt} from the eigendecomposition of a hermitian H.
class UnitaryPropagator {
public:
    explicit UnitaryPropagator(const LinearOperator& h) : config_(h.config()) {
        const double err = h.hermiticity_error();
        if (err >= LinearOperator::kHermitianTolerance)
            throw std::invalid_argument("UnitaryPropagator: Hamiltonian is not hermitian (error " +
                                        std::to_string(err) + ")");
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.dense());
        if (solver.info() != Eigen::Success) throw std::runtime_error("UnitaryPropagator: diagonalization failed");
        energies_ = solver.eigenvalues();
        vectors_ = solver.eigenvectors();
    }

    StateVector evolve(const StateVector& state, double t) const {
        require_same_config(config_, state.config(), "UnitaryPropagator::evolve");
        CVector coeffs = vectors_.adjoint() * state.amplitudes();
        for (Eigen::Index k = 0; k < coeffs.size(); ++k) coeffs(k) *= std::exp(-kI * (energies_(k) * t));
        return StateVector(config_, vectors_ * coeffs, state.leakage());
    }

    CMatrix unitary(double t) const {
        CVector phases(energies_.size());
        for (Eigen::Index k = 0; k < energies_.size(); ++k) phases(k) = std::exp(-kI * (energies_(k) * t));
        return vectors_ * phases.asDiagonal() * vectors_.adjoint();
    }

    const Eigen::VectorXd& energies() const { return energies_; }

private:
    HilbertConfig config_;
    Eigen::VectorXd energies_;
    CMatrix vectors_;
};

inline StateVector evolve_unitary(const LinearOperator& h, const StateVector& state, double t) {
    return UnitaryPropagator(h).evolve(state, t);
}

/// Density matrix on the joint space.
class DensityOperator {
public:
    static constexpr double kHermitianTolerance = 1e-10;
    static constexpr double kTraceTolerance = 1e-6;
    static constexpr double kEigenvalueFloor = -1e-8;

    DensityOperator(HilbertConfig config, CMatrix matrix) : config_(std::move(config)), matrix_(std::move(matrix)) {
        const auto dim = static_cast<Eigen::Index>(config_.dimension());
        if (matrix_.rows() != dim || matrix_.cols() != dim)
            throw std::invalid_argument("DensityOperator: matrix shape does not match configuration");
        const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
        if (herm >= kHermitianTolerance) throw std::invalid_argument("DensityOperator: matrix is not hermitian");
        if (std::abs(trace() - 1.0) >= kTraceTolerance)
            throw std::invalid_argument("DensityOperator: trace " + std::to_string(trace()) + " differs from 1");
        if (min_eigenvalue() < kEigenvalueFloor)
            throw std::invalid_argument("DensityOperator: matrix has a negative eigenvalue");
    }

    static DensityOperator from_pure(const StateVector& state) {
        const CVector& v = state.amplitudes();
        return DensityOperator(state.config(), v * v.adjoint());
    }

    const HilbertConfig& config() const { return config_; }
    const CMatrix& matrix() const { return matrix_; }
    double trace() const { return matrix_.trace().real(); }
    double min_eigenvalue() const { return min_eigenvalue_of(matrix_); }

    static double min_eigenvalue_of(const CMatrix& m) {
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
        return solver.eigenvalues().minCoeff();
    }

private:
    HilbertConfig config_;
    CMatrix matrix_;
};

/// Instantaneous populations. n_bright = <c_1^dagger c_1>; n_dark is the
/// population of all other collective modes (<d^dagger d> for two modes).
struct Observables {
    double sigma_ee = 0.0;
    std::vector<double> n_modes;
    double n_bright = 0.0;
    double n_dark = 0.0;
};

namespace detail {

inline Observables from_correlations(const Eigen::MatrixXcd& corr, double sigma_ee, const OrthogonalMixer& mixer) {
    Observables out;
    out.sigma_ee = sigma_ee;
    const auto m = corr.rows();
    double total = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
        out.n_modes.push_back(corr(k, k).real());
        total += corr(k, k).real();
    }
    Complex bright = 0.0;
    for (Eigen::Index k = 0; k < m; ++k)
        for (Eigen::Index l = 0; l < m; ++l)
            bright += mixer(0, static_cast<int>(k)) * mixer(0, static_cast<int>(l)) * corr(k, l);
    out.n_bright = bright.real();
    out.n_dark = total - out.n_bright;
    return out;
}

inline void require_mixer(const HilbertConfig& config, const OrthogonalMixer& mixer) {
    if (mixer.size() != config.mode_count()) throw std::invalid_argument("observables: mixer size does not match modes");
}

}  // namespace detail

inline Observables observables(const StateVector& state, const OrthogonalMixer& mixer) {
    const HilbertConfig& config = state.config();
    detail::require_mixer(config, mixer);
    const int m = config.mode_count();
    std::vector<CVector> lowered;
    for (int k = 0; k < m; ++k) lowered.push_back(annihilator(config, k).apply(state).amplitudes());
    Eigen::MatrixXcd corr(m, m);
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) corr(k, l) = lowered[static_cast<std::size_t>(k)].dot(lowered[static_cast<std::size_t>(l)]);
    double sigma_ee = 0.0;
    if (config.has_atom()) sigma_ee = atom_component(state, config.excited_level()).norm_squared();
    return detail::from_correlations(corr, sigma_ee, mixer);
}

namespace detail {
inline Observables observables_of_matrix(const HilbertConfig& config, const CMatrix& rho,
                                         const std::vector<CSparse>& lowering, const OrthogonalMixer& mixer) {
    const int m = config.mode_count();
    // <a_k^dagger a_l> = Tr(a_l rho a_k^dagger) = sum_ij conj(a_k)_ij (a_l rho)_ij
    std::vector<CMatrix> lowered;
    for (int l = 0; l < m; ++l) lowered.push_back(lowering[static_cast<std::size_t>(l)] * rho);
    Eigen::MatrixXcd corr(m, m);
    for (int k = 0; k < m; ++k) {
        const CMatrix ak = CMatrix(lowering[static_cast<std::size_t>(k)]).conjugate();
        for (int l = 0; l < m; ++l) corr(k, l) = ak.cwiseProduct(lowered[static_cast<std::size_t>(l)]).sum();
    }
    double sigma_ee = 0.0;
    if (config.has_atom()) {
        const auto block = static_cast<Eigen::Index>(config.field_dimension());
        const auto start = static_cast<Eigen::Index>(config.excited_level()) * block;
        for (Eigen::Index i = 0; i < block; ++i) sigma_ee += rho(start + i, start + i).real();
    }
    return from_correlations(corr, sigma_ee, mixer);
}
}  // namespace detail

inline Observables observables(const DensityOperator& rho, const OrthogonalMixer& mixer) {
    const HilbertConfig& config = rho.config();
    detail::require_mixer(config, mixer);
    std::vector<CSparse> lowering;
    for (int k = 0; k < config.mode_count(); ++k) lowering.push_back(annihilator(config, k).sparse());
    return detail::observables_of_matrix(config, rho.matrix(), lowering, mixer);
}

/// Sampled observable trajectories; every channel has one value per time.
class TimeSeries {
public:
    explicit TimeSeries(std::vector<double> times = {}) : times_(std::move(times)) {}

    const std::vector<double>& times() const { return times_; }
    const std::vector<std::string>& names() const { return names_; }
    std::size_t size() const { return times_.size(); }

    bool has(const std::string& name) const { return std::find(names_.begin(), names_.end(), name) != names_.end(); }

    const std::vector<double>& channel(const std::string& name) const {
        const auto it = std::find(names_.begin(), names_.end(), name);
        if (it == names_.end()) throw std::out_of_range("TimeSeries: no channel '" + name + "'");
        return values_[static_cast<std::size_t>(it - names_.begin())];
    }

    void add_channel(std::string name, std::vector<double> values) {
        if (values.size() != times_.size()) throw std::invalid_argument("TimeSeries: channel length mismatch");
        if (has(name)) throw std::invalid_argument("TimeSeries: duplicate channel '" + name + "'");
        names_.push_back(std::move(name));
        values_.push_back(std::move(values));
    }

private:
    std::vector<double> times_;
    std::vector<std::string> names_;
    std::vector<std::vector<double>> values_;
};

/// CSV column name of mode `mode`: nA, nB for two modes, n1..nM otherwise.
inline std::string mode_channel_name(int mode_count, int mode) {
    if (mode_count == 2) return mode == 0 ? "nA" : "nB";
    return "n" + std::to_string(mode + 1);
}

namespace detail {

inline void require_ascending(const std::vector<double>& grid, const char* where) {
    if (grid.empty()) throw std::invalid_argument(std::string(where) + ": empty time grid");
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k] > grid[k - 1])) throw std::invalid_argument(std::string(where) + ": time grid must be ascending");
}

inline TimeSeries to_series(const std::vector<double>& times, const std::vector<Observables>& samples, int mode_count) {
    TimeSeries series(times);
    std::vector<double> column(samples.size());
    auto fill = [&](auto&& get) {
        for (std::size_t i = 0; i < samples.size(); ++i) column[i] = get(samples[i]);
        return column;
    };
    series.add_channel("sigma_ee", fill([](const Observables& o) { return o.sigma_ee; }));
    for (int k = 0; k < mode_count; ++k)
        series.add_channel(mode_channel_name(mode_count, k),
                           fill([k](const Observables& o) { return o.n_modes[static_cast<std::size_t>(k)]; }));
    series.add_channel("n_bright", fill([](const Observables& o) { return o.n_bright; }));
    series.add_channel("n_dark", fill([](const Observables& o) { return o.n_dark; }));
    return series;
}

}  // namespace detail

/// Sample unitary evolution of `state` under `h` on `times` (state given at t = 0).
inline TimeSeries unitary_series(const LinearOperator& h, const StateVector& state, const std::vector<double>& times,
                                 const OrthogonalMixer& mixer) {
    const UnitaryPropagator propagator(h);
    std::vector<Observables> samples;
    for (double t : times) samples.push_back(observables(propagator.evolve(state, t), mixer));
    return detail::to_series(times, samples, state.config().mode_count());
}

struct LindbladOptions {
    double max_step = 0.0;               // 0: use the default step rule
    bool check_convergence = true;       // rerun at half step and compare channels
    double convergence_tolerance = 1e-6;
    int max_refinements = 3;
    double trace_tolerance = 1e-6;
    bool track_positivity = true;
};

struct LindbladRun {
    TimeSeries series;
    CMatrix final_rho;
    double step = 0.0;
    double convergence_drift = 0.0;     // max channel difference between h and h/2
    double max_trace_error = 0.0;
    double min_eigenvalue = 0.0;        // smallest eigenvalue over sampled times
};

/// h <= min(1/(50 g sqrt(2 n_max M)), 1/(50 max(gamma, kappa)), 1/(50 |detuning|)).
inline double default_lindblad_step(const HilbertConfig& config, const SystemParams& params) {
    double h = std::numeric_limits<double>::infinity();
    const double coupling = params.g * std::sqrt(2.0 * std::max(1, config.cutoff()) * config.mode_count());
    if (coupling > 0.0) h = std::min(h, 1.0 / (50.0 * coupling));
    const double rate = std::max(params.gamma, params.max_kappa());
    if (rate > 0.0) h = std::min(h, 1.0 / (50.0 * rate));
    if (params.detuning != 0.0) h = std::min(h, 1.0 / (50.0 * std::abs(params.detuning)));
    if (!std::isfinite(h)) h = 0.1;
    return h;
}

namespace detail {

struct LindbladGenerator {
    CSparse h_eff;                    // H - (i/2) sum L^dagger L
    std::vector<CSparse> jumps;       // sqrt(rate) L

    LindbladGenerator(const HilbertConfig& config, const SystemParams& params) {
        const LinearOperator h = hamiltonian(config, params);
        CSparse decay(static_cast<Eigen::Index>(config.dimension()), static_cast<Eigen::Index>(config.dimension()));
        auto add_jump = [&](const LinearOperator& op, double rate) {
            if (rate <= 0.0) return;
            CSparse l = std::sqrt(rate) * op.sparse();
            decay += CSparse(l.adjoint()) * l;
            jumps.push_back(std::move(l));
        };
        add_jump(atom_operator(config, AtomOp::lower), params.gamma);
        for (int k = 0; k < config.mode_count(); ++k) add_jump(annihilator(config, k), params.kappa_of(k));
        h_eff = h.sparse() - Complex(0.0, 0.5) * decay;
        h_eff.makeCompressed();
    }

    struct Workspace {
        CMatrix x;
        CMatrix y;
    };

    // rho is hermitian, so rho H_eff^dagger = (H_eff rho)^dagger.
    void operator()(const CMatrix& rho, CMatrix& out, Workspace& w) const {
        w.x.noalias() = h_eff * rho;
        out = -kI * w.x;
        out += kI * w.x.adjoint();
        for (const CSparse& l : jumps) {
            w.y.noalias() = l * rho;
            out.noalias() += w.y * l.adjoint();
        }
    }
};

struct LindbladPass {
    std::vector<Observables> samples;
    CMatrix final_rho;
    double max_trace_error = 0.0;
    double min_eigenvalue = std::numeric_limits<double>::infinity();
};

inline LindbladPass integrate_lindblad(const HilbertConfig& config, const LindbladGenerator& gen, const CMatrix& rho0,
                                       const std::vector<double>& grid, double max_step, const OrthogonalMixer& mixer,
                                       const LindbladOptions& options) {
    std::vector<CSparse> lowering;
    for (int k = 0; k < config.mode_count(); ++k) lowering.push_back(annihilator(config, k).sparse());
    LindbladPass pass;
    CMatrix rho = rho0;
    auto sample = [&](double t) {
        if (!rho.allFinite()) throw IntegrationError("lindblad_evolve: non-finite density matrix at t = " + std::to_string(t));
        const double trace_error = std::abs(rho.trace().real() - 1.0);
        pass.max_trace_error = std::max(pass.max_trace_error, trace_error);
        if (trace_error > options.trace_tolerance)
            throw IntegrationError("lindblad_evolve: trace drifted by " + std::to_string(trace_error) +
                                   " at t = " + std::to_string(t));
        if (options.track_positivity)
            pass.min_eigenvalue = std::min(pass.min_eigenvalue, DensityOperator::min_eigenvalue_of(rho));
        pass.samples.push_back(observables_of_matrix(config, rho, lowering, mixer));
    };
    sample(grid.front());
    LindbladGenerator::Workspace work;
    CMatrix k1, k2, k3, k4, stage;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double span = grid[i] - grid[i - 1];
        const auto steps = std::max(1L, static_cast<long>(std::ceil(span / max_step - 1e-9)));
        const double h = span / static_cast<double>(steps);
        for (long s = 0; s < steps; ++s) {
            gen(rho, k1, work);
            stage = rho + (0.5 * h) * k1;
            gen(stage, k2, work);
            stage = rho + (0.5 * h) * k2;
            gen(stage, k3, work);
            stage = rho + h * k3;
            gen(stage, k4, work);
            rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        // remove the anti-hermitian rounding drift
        stage = rho.adjoint();
        rho = 0.5 * (rho + stage);
        sample(grid[i]);
    }
    pass.final_rho = std::move(rho);
    return pass;
}

inline double max_channel_difference(const std::vector<Observables>& a, const std::vector<Observables>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i].sigma_ee - b[i].sigma_ee));
        worst = std::max(worst, std::abs(a[i].n_bright - b[i].n_bright));
        worst = std::max(worst, std::abs(a[i].n_dark - b[i].n_dark));
        for (std::size_t k = 0; k < a[i].n_modes.size(); ++k)
            worst = std::max(worst, std::abs(a[i].n_modes[k] - b[i].n_modes[k]));
    }
    return worst;
}

}  // namespace detail

/// Integrate the master equation with fixed-step RK4; rho0 is the state at
/// t_grid.front(). With check_convergence the run is repeated at half the
/// step until all sampled channels agree within convergence_tolerance; the
/// finer run is returned.
inline LindbladRun lindblad_run(const HilbertConfig& config, const SystemParams& params, const DensityOperator& rho0,
                                const std::vector<double>& t_grid, const OrthogonalMixer& mixer,
                                const LindbladOptions& options = {}) {
    params.validate();
    require_same_config(config, rho0.config(), "lindblad_evolve");
    detail::require_ascending(t_grid, "lindblad_evolve");
    detail::require_mixer(config, mixer);
    const detail::LindbladGenerator gen(config, params);
    double h = options.max_step > 0.0 ? options.max_step : default_lindblad_step(config, params);
    detail::LindbladPass coarse = detail::integrate_lindblad(config, gen, rho0.matrix(), t_grid, h, mixer, options);
    double drift = 0.0;
    if (options.check_convergence) {
        for (int refinement = 0;; ++refinement) {
            h *= 0.5;
            detail::LindbladPass fine = detail::integrate_lindblad(config, gen, rho0.matrix(), t_grid, h, mixer, options);
            drift = detail::max_channel_difference(coarse.samples, fine.samples);
            coarse = std::move(fine);
            if (drift <= options.convergence_tolerance) break;
            if (refinement + 1 >= options.max_refinements)
                throw IntegrationError("lindblad_evolve: step halving did not converge (drift " + std::to_string(drift) +
                                       ")");
        }
    }
    LindbladRun run{detail::to_series(t_grid, coarse.samples, config.mode_count()), std::move(coarse.final_rho), h,
                    drift, coarse.max_trace_error,
                    options.track_positivity ? coarse.min_eigenvalue : std::numeric_limits<double>::quiet_NaN()};
    return run;
}

inline TimeSeries lindblad_evolve(const HilbertConfig& config, const SystemParams& params, const DensityOperator& rho0,
                                  const std::vector<double>& t_grid, const LindbladOptions& options = {}) {
    return lindblad_run(config, params, rho0, t_grid, default_mixer(config.mode_count()), options).series;
}

/// Bloch variables of the emitter: s = <sigma_ge>, z = <sigma_z>.
struct AtomBloch {
    Complex coherence = 0.0;
    double inversion = -1.0;

    static AtomBloch ground() { return AtomBloch{0.0, -1.0}; }
    static AtomBloch excited() { return AtomBloch{0.0, 1.0}; }
};

struct SemiclassicalOptions {
    double max_step = 1e-3;
};

/// Factorized two-mode model with <c> -> alpha_c:
///   d alpha_c/dt = -kappa alpha_c - i g sqrt2 s
///   ds/dt        = -gamma s + i g sqrt2 alpha_c z
///   dz/dt        = -2 gamma (1 + z) + 2 i g sqrt2 (alpha_c^* s - alpha_c s^*)
/// The dark amplitude alpha_d decays as -kappa alpha_d and only feeds nA, nB.
/// Channels: sigma_ee = (1+z)/2, nA, nB, n_bright, n_dark, alpha_c_re, alpha_c_im.
inline TimeSeries semiclassical_evolve(const SystemParams& params, Complex alpha_c0, AtomBloch atom0,
                                       const std::vector<double>& t_grid, Complex alpha_d0 = 0.0,
                                       const SemiclassicalOptions& options = {}) {
    params.validate();
    if (params.mode_count != 2) throw std::invalid_argument("semiclassical_evolve: two-mode model");
    if (params.kappa.size() > 1 && params.kappa[0] != params.kappa[1])
        throw std::invalid_argument("semiclassical_evolve: both modes must share one kappa");
    detail::require_ascending(t_grid, "semiclassical_evolve");
    const double kappa = params.kappa_of(0);
    const double gamma = params.gamma;
    const double coupling = params.g * std::numbers::sqrt2;

    struct Vars {
        Complex alpha;
        Complex s;
        double z;
        Complex dark;
    };
    auto rhs = [&](const Vars& v) {
        const Complex exchange = std::conj(v.alpha) * v.s - v.alpha * std::conj(v.s);
        return Vars{-kappa * v.alpha - kI * coupling * v.s, -gamma * v.s + kI * coupling * v.alpha * v.z,
                    (-2.0 * gamma * (1.0 + v.z) + 2.0 * kI * coupling * exchange).real(), -kappa * v.dark};
    };
    auto axpy = [](const Vars& v, double h, const Vars& k) {
        return Vars{v.alpha + h * k.alpha, v.s + h * k.s, v.z + h * k.z, v.dark + h * k.dark};
    };

    std::vector<double> sigma, na, nb, bright, dark, re, im;
    Vars v{alpha_c0, atom0.coherence, atom0.inversion, alpha_d0};
    auto record = [&](double t) {
        if (!std::isfinite(v.z) || !std::isfinite(std::abs(v.alpha)) || !std::isfinite(std::abs(v.s)))
            throw IntegrationError("semiclassical_evolve: non-finite state at t = " + std::to_string(t));
        const Complex a = (v.alpha - v.dark) / std::numbers::sqrt2;
        const Complex b = (v.alpha + v.dark) / std::numbers::sqrt2;
        sigma.push_back(0.5 * (1.0 + v.z));
        na.push_back(std::norm(a));
        nb.push_back(std::norm(b));
        bright.push_back(std::norm(v.alpha));
        dark.push_back(std::norm(v.dark));
        re.push_back(v.alpha.real());
        im.push_back(v.alpha.imag());
    };
    record(t_grid.front());
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        const double span = t_grid[i] - t_grid[i - 1];
        const long steps = std::max(1L, static_cast<long>(std::ceil(span / options.max_step - 1e-9)));
        const double h = span / static_cast<double>(steps);
        for (long s = 0; s < steps; ++s) {
            const Vars k1 = rhs(v);
            const Vars k2 = rhs(axpy(v, 0.5 * h, k1));
            const Vars k3 = rhs(axpy(v, 0.5 * h, k2));
            const Vars k4 = rhs(axpy(v, h, k3));
            v = Vars{v.alpha + h / 6.0 * (k1.alpha + 2.0 * k2.alpha + 2.0 * k3.alpha + k4.alpha),
                     v.s + h / 6.0 * (k1.s + 2.0 * k2.s + 2.0 * k3.s + k4.s),
                     v.z + h / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z),
                     v.dark + h / 6.0 * (k1.dark + 2.0 * k2.dark + 2.0 * k3.dark + k4.dark)};
        }
        record(t_grid[i]);
    }
    TimeSeries series(t_grid);
    series.add_channel("sigma_ee", std::move(sigma));
    series.add_channel("nA", std::move(na));
    series.add_channel("nB", std::move(nb));
    series.add_channel("n_bright", std::move(bright));
    series.add_channel("n_dark", std::move(dark));
    series.add_channel("alpha_c_re", std::move(re));
    series.add_channel("alpha_c_im", std::move(im));
    return series;
}

}  // namespace brightdark
