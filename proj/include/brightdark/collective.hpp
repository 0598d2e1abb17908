// collective.hpp - Dicke-like bosonic basis built from collective modes.
//
// Collective creators c_j^dagger = sum_k O_jk a_k^dagger are defined by a real
// orthogonal mixer O. Row 1 of O is uniform, so c_1 is the only mode that
// couples to an emitter equally coupled to all physical modes. A collective
// index (n_1, ..., n_M) labels the state prod_j (c_j^dagger)^{n_j}/sqrt(n_j!) |0>.
// States with n_1 = 0 are dark; n_1 = N is maximally superradiant.

#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "brightdark/fock.hpp"

namespace brightdark {

struct CollectiveIndex {
    std::vector<int> occupations;  // (n_1, ..., n_M), n_1 on the symmetric mode

    int total() const { return std::accumulate(occupations.begin(), occupations.end(), 0); }
    int bright() const { return occupations.empty() ? 0 : occupations.front(); }

    /// Two-mode shorthand psi^N_n: n photons in c, N - n in d.
    static CollectiveIndex two_mode(int total, int n) { return CollectiveIndex{{n, total - n}}; }

    friend auto operator<=>(const CollectiveIndex&, const CollectiveIndex&) = default;
};

enum class MixerKind { sylvester, helmert };

inline const char* to_string(MixerKind kind) { return kind == MixerKind::sylvester ? "sylvester" : "helmert"; }

/// Real orthogonal M x M matrix defining the collective modes.
///
/// `row_signs` records sign flips applied on top of the builder's natural
/// rows so tests can compare against either convention.
class OrthogonalMixer {
public:
    static constexpr double kOrthogonalityTolerance = 1e-12;

    OrthogonalMixer(Eigen::MatrixXd matrix, MixerKind kind, std::vector<int> row_signs = {})
        : matrix_(std::move(matrix)), kind_(kind), row_signs_(std::move(row_signs)) {
        if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1)
            throw std::invalid_argument("OrthogonalMixer: matrix must be square");
        if (row_signs_.empty()) row_signs_.assign(static_cast<std::size_t>(matrix_.rows()), 1);
        if (orthogonality_error() >= kOrthogonalityTolerance)
            throw std::invalid_argument("OrthogonalMixer: matrix is not orthogonal");
    }

    int size() const { return static_cast<int>(matrix_.rows()); }
    double operator()(int row, int col) const { return matrix_(row, col); }
    const Eigen::MatrixXd& matrix() const { return matrix_; }
    MixerKind kind() const { return kind_; }
    const std::vector<int>& row_signs() const { return row_signs_; }

    double orthogonality_error() const {
        const auto n = matrix_.rows();
        return (matrix_ * matrix_.transpose() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    }

    /// Copy with row `row` multiplied by -1.
    OrthogonalMixer with_row_flipped(int row) const {
        if (row < 0 || row >= size()) throw std::out_of_range("OrthogonalMixer: row out of range");
        Eigen::MatrixXd m = matrix_;
        m.row(row) *= -1.0;
        std::vector<int> signs = row_signs_;
        signs[static_cast<std::size_t>(row)] *= -1;
        return OrthogonalMixer(std::move(m), kind_, std::move(signs));
    }

private:
    Eigen::MatrixXd matrix_;
    MixerKind kind_;
    std::vector<int> row_signs_;
};

/// Sylvester-Hadamard (natural order, M a power of two) or Helmert (any M >= 2).
///
/// Sylvester rows: row 1 all 1/sqrt(M); row 2 alternates (+, -, +, ...)/sqrt(M);
/// the remaining rows follow the Kronecker order H_2 (x) ... (x) H_2.
inline OrthogonalMixer build_mixer(int mode_count, MixerKind kind) {
    if (mode_count < 1) throw std::invalid_argument("build_mixer: mode count must be positive");
    const double scale = 1.0 / std::sqrt(static_cast<double>(mode_count));
    if (kind == MixerKind::sylvester) {
        if ((mode_count & (mode_count - 1)) != 0)
            throw std::invalid_argument("build_mixer: sylvester mixer needs a power-of-two mode count, got " +
                                        std::to_string(mode_count));
        Eigen::MatrixXd h = Eigen::MatrixXd::Ones(1, 1);
        while (h.rows() < mode_count) {
            // h <- h (x) H_2, which keeps row 2 alternating
            const auto n = h.rows();
            Eigen::MatrixXd next(2 * n, 2 * n);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j) {
                    next(2 * i, 2 * j) = h(i, j);
                    next(2 * i, 2 * j + 1) = h(i, j);
                    next(2 * i + 1, 2 * j) = h(i, j);
                    next(2 * i + 1, 2 * j + 1) = -h(i, j);
                }
            h = std::move(next);
        }
        return OrthogonalMixer(scale * h, kind);
    }
    if (mode_count < 2) throw std::invalid_argument("build_mixer: helmert mixer needs at least two modes");
    Eigen::MatrixXd o = Eigen::MatrixXd::Zero(mode_count, mode_count);
    for (int k = 0; k < mode_count; ++k) o(0, k) = scale;
    for (int j = 2; j <= mode_count; ++j) {
        const double norm = std::sqrt(static_cast<double>(j) * (j - 1));
        for (int k = 1; k < j; ++k) o(j - 1, k - 1) = 1.0 / norm;
        o(j - 1, j - 1) = (1.0 - j) / norm;
    }
    return OrthogonalMixer(std::move(o), kind);
}

/// Two-mode mixer c = (a + b)/sqrt2, d = (-a + b)/sqrt2.
///
/// This is the Sylvester matrix with its second row flipped; the collective
/// amplitudes quoted for two modes (e.g. the expansion of |Upsilon>) use it.
inline OrthogonalMixer two_mode_mixer() { return build_mixer(2, MixerKind::sylvester).with_row_flipped(1); }

/// Default mixer for `mode_count` modes: two_mode_mixer() for M = 2,
/// Sylvester for other powers of two, Helmert otherwise.
inline OrthogonalMixer default_mixer(int mode_count) {
    if (mode_count == 2) return two_mode_mixer();
    if (mode_count >= 1 && (mode_count & (mode_count - 1)) == 0) return build_mixer(mode_count, MixerKind::sylvester);
    return build_mixer(mode_count, MixerKind::helmert);
}

namespace detail {
inline double factorial(int n) { return std::tgamma(static_cast<double>(n) + 1.0); }
}  // namespace detail

/// Closed-form amplitude <m, N-m | psi^N_n> of the two-mode collective state
/// (c = (a+b)/sqrt2, d = (-a+b)/sqrt2).
inline double coefficient(int total, int n, int m) {
    if (total < 0 || n < 0 || n > total || m < 0 || m > total)
        throw std::out_of_range("coefficient: indices must satisfy 0 <= n, m <= N");
    using detail::factorial;
    const int q_min = std::max(0, n + m - total);
    const int q_max = std::min(m, n);
    double sum = 0.0;
    for (int q = q_min; q <= q_max; ++q) {
        const double sign = ((m - q) % 2 == 0) ? 1.0 : -1.0;
        sum += sign / (factorial(q) * factorial(n - q) * factorial(m - q) * factorial(total - n - m + q));
    }
    return std::sqrt(factorial(n) * factorial(total - n) / std::pow(2.0, total)) *
           std::sqrt(factorial(m) * factorial(total - m)) * sum;
}

namespace detail {
inline StateVector apply_collective_creator(const StateVector& state, const OrthogonalMixer& mixer, int row) {
    StateVector out = StateVector::zero(state.config());
    for (int k = 0; k < mixer.size(); ++k) {
        const double weight = mixer(row, k);
        if (weight == 0.0) continue;
        out = out + Complex(weight) * apply_creator(state, k);
    }
    return out;
}
}  // namespace detail

/// c_j (or c_j^dagger via adjoint) as a matrix on `config`.
inline LinearOperator collective_annihilator(const HilbertConfig& config, const OrthogonalMixer& mixer, int row) {
    if (mixer.size() != config.mode_count())
        throw std::invalid_argument("collective_annihilator: mixer size does not match mode count");
    if (row < 0 || row >= mixer.size()) throw std::out_of_range("collective_annihilator: row out of range");
    const auto dim = static_cast<Eigen::Index>(config.dimension());
    LinearOperator c(config, CSparse(dim, dim));
    for (int k = 0; k < mixer.size(); ++k)
        if (mixer(row, k) != 0.0) c = c + mixer(row, k) * annihilator(config, k);
    return c;
}

/// prod_j (c_j^dagger)^{n_j} / sqrt(n_j!) |0>, atom (if any) in level 0.
inline StateVector collective_state(const HilbertConfig& config, const CollectiveIndex& index,
                                    const OrthogonalMixer& mixer) {
    if (mixer.size() != config.mode_count())
        throw std::invalid_argument("collective_state: mixer size does not match mode count");
    if (static_cast<int>(index.occupations.size()) != config.mode_count())
        throw std::invalid_argument("collective_state: index length does not match mode count");
    for (int n : index.occupations)
        if (n < 0) throw std::out_of_range("collective_state: negative occupation");
    if (index.total() > config.cutoff())
        throw std::out_of_range("collective_state: N = " + std::to_string(index.total()) + " exceeds cutoff " +
                                std::to_string(config.cutoff()));
    StateVector state = StateVector::fock(config, std::vector<int>(static_cast<std::size_t>(config.mode_count()), 0));
    for (int j = 0; j < mixer.size(); ++j) {
        const int n = index.occupations[static_cast<std::size_t>(j)];
        for (int r = 0; r < n; ++r) state = detail::apply_collective_creator(state, mixer, j);
        state = Complex(1.0 / std::sqrt(detail::factorial(n))) * state;
    }
    return state;
}

/// Two-mode psi^N_n with the (a+b, -a+b) convention.
inline StateVector collective_state(const HilbertConfig& config, int total, int n) {
    if (config.mode_count() != 2) throw std::invalid_argument("collective_state(N, n): two-mode configuration required");
    if (n < 0 || n > total) throw std::out_of_range("collective_state: need 0 <= n <= N");
    return collective_state(config, CollectiveIndex::two_mode(total, n), two_mode_mixer());
}

/// Two-mode state sum_m C^N_{m,n} |m, N-m> from the closed-form coefficients.
inline StateVector collective_state_from_coefficients(const HilbertConfig& config, int total, int n) {
    if (config.mode_count() != 2) throw std::invalid_argument("collective_state_from_coefficients: two modes required");
    if (total > config.cutoff()) throw std::out_of_range("collective_state_from_coefficients: N exceeds cutoff");
    StateVector state = StateVector::zero(config);
    CVector v = state.amplitudes();
    for (int m = 0; m <= total; ++m)
        v(static_cast<Eigen::Index>(config.index(Occupation{{m, total - m}, 0}))) = coefficient(total, n, m);
    return StateVector(config, std::move(v));
}

/// chi^N(dphi) = sqrt(N!/2^N) sum_m e^{-i m dphi} / sqrt(m!(N-m)!) |m, N-m>.
inline StateVector chi_state(const HilbertConfig& config, int total, double dphi) {
    if (config.mode_count() != 2) throw std::invalid_argument("chi_state: two-mode configuration required");
    if (total < 0) throw std::out_of_range("chi_state: negative photon number");
    if (total > config.cutoff())
        throw std::out_of_range("chi_state: N = " + std::to_string(total) + " exceeds cutoff");
    using detail::factorial;
    const double prefactor = std::sqrt(factorial(total) / std::pow(2.0, total));
    CVector v = CVector::Zero(static_cast<Eigen::Index>(config.dimension()));
    for (int m = 0; m <= total; ++m)
        v(static_cast<Eigen::Index>(config.index(Occupation{{m, total - m}, 0}))) =
            prefactor * std::exp(-kI * (m * dphi)) / std::sqrt(factorial(m) * factorial(total - m));
    return StateVector(config, std::move(v));
}

/// All collective indices with N <= max_total: ascending N, then lexicographic.
inline std::vector<CollectiveIndex> enumerate_indices(int mode_count, int max_total) {
    std::vector<CollectiveIndex> out;
    std::vector<int> occ(static_cast<std::size_t>(mode_count), 0);
    for (int total = 0; total <= max_total; ++total) {
        // lexicographic compositions of `total` into mode_count parts
        auto recurse = [&](auto&& self, int pos, int remaining) -> void {
            if (pos == mode_count - 1) {
                occ[static_cast<std::size_t>(pos)] = remaining;
                out.push_back(CollectiveIndex{occ});
                return;
            }
            for (int v = 0; v <= remaining; ++v) {
                occ[static_cast<std::size_t>(pos)] = v;
                self(self, pos + 1, remaining - v);
            }
        };
        recurse(recurse, 0, total);
    }
    return out;
}

struct CollectiveDecomposition {
    struct Entry {
        CollectiveIndex index;
        Complex amplitude;
    };

    std::vector<Entry> entries;  // pruned of negligible amplitudes
    double residual = 0.0;       // |state|^2 minus the weight on all enumerated indices
    double norm_squared = 0.0;
    double vacuum_weight = 0.0;
    double dark_weight = 0.0;          // n_1 = 0, vacuum included
    double mss_weight = 0.0;           // n_1 = N >= 1
    double intermediate_weight = 0.0;  // 0 < n_1 < N

    /// Weight outside the dark sector (the residual counts as non-dark).
    double non_dark_weight() const { return mss_weight + intermediate_weight + residual; }
    /// Weight outside the maximally superradiant sector; the vacuum counts as MSS here.
    double non_mss_weight() const { return dark_weight - vacuum_weight + intermediate_weight + residual; }

    const Entry* find(const CollectiveIndex& index) const {
        for (const auto& e : entries)
            if (e.index == index) return &e;
        return nullptr;
    }
    Complex amplitude(const CollectiveIndex& index) const {
        const Entry* e = find(index);
        return e ? e->amplitude : Complex(0.0);
    }
};

/// Amplitudes <psi_index|state> for every index with N <= cutoff.
/// Entries with |amplitude| <= drop_below are left out of `entries` but still
/// contribute to the weight summaries.
inline CollectiveDecomposition decompose(const StateVector& state, const OrthogonalMixer& mixer,
                                         double drop_below = 1e-13) {
    const HilbertConfig& config = state.config();
    if (config.has_atom()) throw std::invalid_argument("decompose: expects a field-only state");
    if (mixer.size() != config.mode_count())
        throw std::invalid_argument("decompose: mixer size does not match mode count");
    CollectiveDecomposition out;
    out.norm_squared = state.norm_squared();
    double captured = 0.0;
    for (const CollectiveIndex& index : enumerate_indices(config.mode_count(), config.cutoff())) {
        const Complex amp = inner(collective_state(config, index, mixer), state);
        const double w = std::norm(amp);
        captured += w;
        const int total = index.total();
        if (total == 0) {
            out.vacuum_weight += w;
            out.dark_weight += w;
        } else if (index.bright() == 0) {
            out.dark_weight += w;
        } else if (index.bright() == total) {
            out.mss_weight += w;
        } else {
            out.intermediate_weight += w;
        }
        if (std::abs(amp) > drop_below) out.entries.push_back({index, amp});
    }
    out.residual = std::max(0.0, out.norm_squared - captured);
    return out;
}

inline CollectiveDecomposition decompose(const StateVector& state) {
    return decompose(state, default_mixer(state.config().mode_count()));
}

}  // namespace brightdark
