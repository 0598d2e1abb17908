// interferometer.hpp - 50/50 beam splitters, phase shifter and the
// Mach-Zehnder interferometer for two-mode quantum states and classical fields.
//
// Beam splitter (state picture): a^dagger -> (a^dagger - i b^dagger)/sqrt2,
// b^dagger -> (b^dagger - i a^dagger)/sqrt2, i.e. U = exp(-i pi/4 (a^dagger b + a b^dagger)).
// The phase shifter multiplies mode B by e^{i phi}. Classical Rabi amplitudes
// transform with the same 2x2 matrix, so both pipelines share the arm labels.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "brightdark/fock.hpp"

namespace brightdark {

/// Column k holds the image of a_k^dagger: a_k^dagger -> sum_j U(j,k) a_j^dagger.
using ModeMatrix = Eigen::Matrix2cd;

inline ModeMatrix beam_splitter_matrix() {
    const double s = 1.0 / std::numbers::sqrt2;
    ModeMatrix u;
    u << s, -kI * s, -kI * s, s;
    return u;
}

inline ModeMatrix phase_shifter_matrix(double phi) {
    ModeMatrix u;
    u << 1.0, 0.0, 0.0, std::exp(kI * phi);
    return u;
}

namespace detail {

inline void require_two_modes(const HilbertConfig& config, const char* where) {
    if (config.mode_count() != 2) throw std::invalid_argument(std::string(where) + ": two-mode configuration required");
}

inline double binomial(int n, int k) {
    return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

inline Complex ipow(Complex base, int exponent) {
    Complex out = 1.0;
    for (int k = 0; k < exponent; ++k) out *= base;
    return out;
}

inline std::vector<double> sqrt_factorials(int n) {
    std::vector<double> out(static_cast<std::size_t>(n) + 1, 1.0);
    double f = 1.0;
    for (int k = 1; k <= n; ++k) {
        f *= k;
        out[static_cast<std::size_t>(k)] = std::sqrt(f);
    }
    return out;
}

}  // namespace detail

/// Apply a passive two-mode transform by substituting creation operators in
/// every Fock component. Output occupations beyond the cutoff are dropped and
/// their squared norm is added to the leakage.
inline StateVector apply_mode_transform(const StateVector& state, const ModeMatrix& u) {
    const HilbertConfig& config = state.config();
    detail::require_two_modes(config, "apply_mode_transform");
    const int cutoff = config.cutoff();
    const int wide = 2 * cutoff + 1;
    const auto sqrt_fact = detail::sqrt_factorials(2 * cutoff);
    CVector out = CVector::Zero(static_cast<Eigen::Index>(config.dimension()));
    double lost = 0.0;
    std::vector<Complex> overflow(static_cast<std::size_t>(wide * wide));
    for (int level = 0; level < config.atom_levels(); ++level) {
        std::fill(overflow.begin(), overflow.end(), Complex(0.0));
        bool overflowed = false;
        for (int m1 = 0; m1 <= cutoff; ++m1) {
            for (int m2 = 0; m2 <= cutoff; ++m2) {
                const std::size_t src = config.index(Occupation{{m1, m2}, level});
                const Complex c = state.amplitude(src);
                if (c == Complex(0.0)) continue;
                const int total = m1 + m2;
                const Complex base = c / (sqrt_fact[static_cast<std::size_t>(m1)] * sqrt_fact[static_cast<std::size_t>(m2)]);
                for (int p = 0; p <= m1; ++p) {
                    const Complex first = detail::binomial(m1, p) * detail::ipow(u(0, 0), p) * detail::ipow(u(1, 0), m1 - p);
                    for (int q = 0; q <= m2; ++q) {
                        const Complex second =
                            detail::binomial(m2, q) * detail::ipow(u(0, 1), q) * detail::ipow(u(1, 1), m2 - q);
                        const int na = p + q;
                        const int nb = total - na;
                        const Complex amp = base * first * second * sqrt_fact[static_cast<std::size_t>(na)] *
                                            sqrt_fact[static_cast<std::size_t>(nb)];
                        if (na <= cutoff && nb <= cutoff) {
                            out(static_cast<Eigen::Index>(config.index(Occupation{{na, nb}, level}))) += amp;
                        } else {
                            overflow[static_cast<std::size_t>(na * wide + nb)] += amp;
                            overflowed = true;
                        }
                    }
                }
            }
        }
        if (overflowed)
            for (const Complex& z : overflow) lost += std::norm(z);
    }
    return StateVector(config, std::move(out), state.leakage() + lost);
}

inline StateVector beam_splitter(const StateVector& state) { return apply_mode_transform(state, beam_splitter_matrix()); }

/// Multiplies the amplitude of |m_A, m_B> by e^{i phi m_B}.
inline StateVector phase_shifter(const StateVector& state, double phi) {
    const HilbertConfig& config = state.config();
    detail::require_two_modes(config, "phase_shifter");
    CVector out = state.amplitudes();
    for (std::size_t i = 0; i < config.dimension(); ++i)
        out(static_cast<Eigen::Index>(i)) *= std::exp(kI * (phi * config.count(i, 1)));
    return StateVector(config, std::move(out), state.leakage());
}

/// Beam splitter, phase phi on arm B, beam splitter.
inline StateVector mzi(const StateVector& state, double phi) {
    return beam_splitter(phase_shifter(beam_splitter(state), phi));
}

struct ArmIntensities {
    double a = 0.0;
    double b = 0.0;
    double total() const { return a + b; }
};

inline ArmIntensities mode_populations(const StateVector& state) {
    const HilbertConfig& config = state.config();
    ArmIntensities out;
    for (std::size_t i = 0; i < config.dimension(); ++i) {
        const double w = std::norm(state.amplitude(i));
        out.a += w * config.count(i, 0);
        out.b += w * config.count(i, 1);
    }
    return out;
}

inline ArmIntensities mzi_intensities(const StateVector& state, double phi) {
    detail::require_two_modes(state.config(), "mzi_intensities");
    return mode_populations(mzi(state, phi));
}

/// Two complex Rabi amplitudes entering arms A and B.
struct ClassicalField {
    Complex a;
    Complex b;

    /// Omega_A = sqrt(I), Omega_B = e^{i theta} sqrt(I).
    static ClassicalField from_phase(double theta, double intensity) {
        const double omega = std::sqrt(intensity);
        return ClassicalField{omega, std::exp(kI * theta) * omega};
    }
    ArmIntensities intensities() const { return ArmIntensities{std::norm(a), std::norm(b)}; }
};

inline ClassicalField transform(const ClassicalField& field, const ModeMatrix& u) {
    return ClassicalField{u(0, 0) * field.a + u(0, 1) * field.b, u(1, 0) * field.a + u(1, 1) * field.b};
}

inline ClassicalField classical_mzi(const ClassicalField& field, double phi) {
    const ModeMatrix bs = beam_splitter_matrix();
    return transform(transform(transform(field, bs), phase_shifter_matrix(phi)), bs);
}

inline ArmIntensities classical_intensities(const ClassicalField& field, double phi) {
    return classical_mzi(field, phi).intensities();
}

/// Closed form I_in (1 +/- cos(theta) sin(phi)) for inputs (Omega, e^{i theta} Omega).
inline ArmIntensities classical_intensities_closed_form(double theta, double intensity, double phi) {
    const double swing = std::cos(theta) * std::sin(phi);
    return ArmIntensities{intensity * (1.0 + swing), intensity * (1.0 - swing)};
}

/// (max - min)/(max + min); 0 when max + min vanishes.
inline double visibility(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("visibility: no values");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double sum = *hi + *lo;
    if (sum <= 0.0) return 0.0;
    return std::clamp((*hi - *lo) / sum, 0.0, 1.0);
}

struct FringeScan {
    std::vector<double> phi;
    std::vector<double> n_a;
    std::vector<double> n_b;
    double visibility_a = 0.0;
    double visibility_b = 0.0;
    double leakage = 0.0;  // largest weight lost at the cutoff over the scan
};

namespace detail {
template <typename Intensities>
FringeScan scan(const std::vector<double>& grid, Intensities&& at) {
    if (grid.empty()) throw std::invalid_argument("fringe_scan: empty phase grid");
    FringeScan out;
    out.phi = grid;
    for (double phi : grid) {
        const ArmIntensities i = at(phi);
        out.n_a.push_back(i.a);
        out.n_b.push_back(i.b);
    }
    out.visibility_a = visibility(out.n_a);
    out.visibility_b = visibility(out.n_b);
    return out;
}
}  // namespace detail

inline FringeScan fringe_scan(const StateVector& state, const std::vector<double>& grid) {
    detail::require_two_modes(state.config(), "fringe_scan");
    double leakage = state.leakage();
    FringeScan out = detail::scan(grid, [&](double phi) {
        const StateVector after = mzi(state, phi);
        leakage = std::max(leakage, after.leakage());
        return mode_populations(after);
    });
    out.leakage = leakage;
    return out;
}

inline FringeScan fringe_scan(const ClassicalField& field, const std::vector<double>& grid) {
    return detail::scan(grid, [&](double phi) { return classical_intensities(field, phi); });
}

}  // namespace brightdark
