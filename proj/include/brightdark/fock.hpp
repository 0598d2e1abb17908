// fock.hpp - Truncated multimode Fock space with an optional atom factor.
//
// Basis order: atom index slowest, then mode 1 ... mode M (mode M fastest).
// Every mode carries an independent cutoff n_max, so the local dimension of
// a mode is n_max + 1 and the joint dimension is atom_levels * (n_max+1)^M.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace brightdark {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using CSparse = Eigen::SparseMatrix<Complex>;

inline constexpr Complex kI{0.0, 1.0};

/// Per-mode photon counts plus the atom level (0 when there is no atom).
struct Occupation {
    std::vector<int> modes;
    int atom = 0;

    int total() const { return std::accumulate(modes.begin(), modes.end(), 0); }
    friend bool operator==(const Occupation&, const Occupation&) = default;
};

/// Shape of the joint atom (x) modes space.
///
/// atom_levels: 1 = no atom, 2 = {g, e}, 3 = {g1, g2, e}. The excited level is
/// always the last index.
class HilbertConfig {
public:
    static constexpr std::size_t kDefaultMaxDimension = std::size_t{1} << 22;

    HilbertConfig(int mode_count, int cutoff, int atom_levels = 1,
                  std::size_t max_dimension = kDefaultMaxDimension)
        : mode_count_(mode_count), cutoff_(cutoff), atom_levels_(atom_levels) {
        if (mode_count < 1) throw std::invalid_argument("HilbertConfig: mode_count must be positive");
        if (cutoff < 0) throw std::invalid_argument("HilbertConfig: cutoff must be non-negative");
        if (atom_levels < 1 || atom_levels > 3)
            throw std::invalid_argument("HilbertConfig: atom_levels must be 1, 2 or 3");
        const auto local = static_cast<std::size_t>(cutoff) + 1;
        std::size_t field = 1;
        for (int k = 0; k < mode_count; ++k) {
            if (field > max_dimension / local)
                throw std::length_error("HilbertConfig: joint dimension exceeds limit " +
                                        std::to_string(max_dimension));
            field *= local;
        }
        if (field > max_dimension / static_cast<std::size_t>(atom_levels))
            throw std::length_error("HilbertConfig: joint dimension exceeds limit " +
                                    std::to_string(max_dimension));
        field_dimension_ = field;
    }

    int mode_count() const { return mode_count_; }
    int cutoff() const { return cutoff_; }
    int atom_levels() const { return atom_levels_; }
    bool has_atom() const { return atom_levels_ > 1; }
    int local_dimension() const { return cutoff_ + 1; }
    int excited_level() const { return atom_levels_ - 1; }

    std::size_t field_dimension() const { return field_dimension_; }
    std::size_t dimension() const { return field_dimension_ * static_cast<std::size_t>(atom_levels_); }

    /// Index distance between neighbouring occupations of `mode`.
    std::size_t mode_stride(int mode) const {
        std::size_t stride = 1;
        for (int k = mode_count_ - 1; k > mode; --k) stride *= static_cast<std::size_t>(local_dimension());
        return stride;
    }

    HilbertConfig with_atom_levels(int levels) const {
        return HilbertConfig(mode_count_, cutoff_, levels);
    }
    HilbertConfig field_only() const { return with_atom_levels(1); }

    std::size_t index(const Occupation& occ) const {
        if (static_cast<int>(occ.modes.size()) != mode_count_)
            throw std::invalid_argument("HilbertConfig::index: wrong number of modes");
        if (occ.atom < 0 || occ.atom >= atom_levels_)
            throw std::out_of_range("HilbertConfig::index: atom level out of range");
        std::size_t idx = static_cast<std::size_t>(occ.atom);
        for (int m : occ.modes) {
            if (m < 0 || m > cutoff_) throw std::out_of_range("HilbertConfig::index: occupation beyond cutoff");
            idx = idx * static_cast<std::size_t>(local_dimension()) + static_cast<std::size_t>(m);
        }
        return idx;
    }

    Occupation occupation(std::size_t index) const {
        if (index >= dimension()) throw std::out_of_range("HilbertConfig::occupation: index out of range");
        Occupation occ;
        occ.modes.resize(static_cast<std::size_t>(mode_count_));
        const auto local = static_cast<std::size_t>(local_dimension());
        for (int k = mode_count_ - 1; k >= 0; --k) {
            occ.modes[static_cast<std::size_t>(k)] = static_cast<int>(index % local);
            index /= local;
        }
        occ.atom = static_cast<int>(index);
        return occ;
    }

    /// Photon number of mode `mode` at joint index `index`.
    int count(std::size_t index, int mode) const {
        return static_cast<int>((index / mode_stride(mode)) % static_cast<std::size_t>(local_dimension()));
    }
    int atom_level(std::size_t index) const { return static_cast<int>(index / field_dimension_); }
    int total_photons(std::size_t index) const {
        int n = 0;
        const auto local = static_cast<std::size_t>(local_dimension());
        std::size_t rest = index % field_dimension_;
        for (int k = 0; k < mode_count_; ++k) {
            n += static_cast<int>(rest % local);
            rest /= local;
        }
        return n;
    }

    friend bool operator==(const HilbertConfig& a, const HilbertConfig& b) {
        return a.mode_count_ == b.mode_count_ && a.cutoff_ == b.cutoff_ && a.atom_levels_ == b.atom_levels_;
    }

private:
    int mode_count_;
    int cutoff_;
    int atom_levels_;
    std::size_t field_dimension_ = 1;
};

inline void require_same_config(const HilbertConfig& a, const HilbertConfig& b, const char* where) {
    if (!(a == b)) throw std::invalid_argument(std::string(where) + ": configuration mismatch");
}

/// Complex amplitudes over the joint basis.
///
/// `leakage` is the squared norm that was dropped by creation operators acting
/// on components already at the cutoff (see apply_creator).
class StateVector {
public:
    StateVector(HilbertConfig config, CVector amplitudes, double leakage = 0.0)
        : config_(std::move(config)), amplitudes_(std::move(amplitudes)), leakage_(leakage) {
        if (static_cast<std::size_t>(amplitudes_.size()) != config_.dimension())
            throw std::invalid_argument("StateVector: amplitude count does not match configuration");
    }

    static StateVector zero(const HilbertConfig& config) {
        return StateVector(config, CVector::Zero(static_cast<Eigen::Index>(config.dimension())));
    }
    static StateVector basis(const HilbertConfig& config, const Occupation& occ) {
        CVector v = CVector::Zero(static_cast<Eigen::Index>(config.dimension()));
        v(static_cast<Eigen::Index>(config.index(occ))) = 1.0;
        return StateVector(config, std::move(v));
    }
    /// Fock state |m_1..m_M> with the atom in `atom` (default ground).
    static StateVector fock(const HilbertConfig& config, std::vector<int> modes, int atom = 0) {
        return basis(config, Occupation{std::move(modes), atom});
    }

    const HilbertConfig& config() const { return config_; }
    const CVector& amplitudes() const { return amplitudes_; }
    double leakage() const { return leakage_; }
    std::size_t dimension() const { return config_.dimension(); }

    Complex amplitude(std::size_t index) const { return amplitudes_(static_cast<Eigen::Index>(index)); }
    Complex operator[](const Occupation& occ) const { return amplitude(config_.index(occ)); }

    double norm_squared() const { return amplitudes_.squaredNorm(); }
    double norm() const { return amplitudes_.norm(); }

    StateVector normalized() const {
        const double n = norm();
        if (n == 0.0) throw std::domain_error("StateVector::normalized: zero vector");
        return StateVector(config_, amplitudes_ / n, leakage_);
    }

    friend StateVector operator+(const StateVector& a, const StateVector& b) {
        require_same_config(a.config_, b.config_, "StateVector::operator+");
        return StateVector(a.config_, a.amplitudes_ + b.amplitudes_, a.leakage_ + b.leakage_);
    }
    friend StateVector operator-(const StateVector& a, const StateVector& b) {
        require_same_config(a.config_, b.config_, "StateVector::operator-");
        return StateVector(a.config_, a.amplitudes_ - b.amplitudes_, a.leakage_ + b.leakage_);
    }
    friend StateVector operator*(Complex s, const StateVector& v) {
        return StateVector(v.config_, s * v.amplitudes_, std::norm(s) * v.leakage_);
    }

private:
    HilbertConfig config_;
    CVector amplitudes_;
    double leakage_ = 0.0;
};

/// Square operator on the joint space, stored sparse when at most 5% filled.
class LinearOperator {
public:
    static constexpr double kSparseFill = 0.05;
    static constexpr double kHermitianTolerance = 1e-12;

    LinearOperator(HilbertConfig config, CSparse matrix, bool hermitian = false)
        : config_(std::move(config)), hermitian_(hermitian) {
        check_shape(matrix.rows(), matrix.cols());
        matrix.makeCompressed();
        store(std::move(matrix));
        if (hermitian_) validate_hermitian();
    }
    LinearOperator(HilbertConfig config, CMatrix matrix, bool hermitian = false)
        : config_(std::move(config)), hermitian_(hermitian) {
        check_shape(matrix.rows(), matrix.cols());
        CSparse s = matrix.sparseView(Complex(0.0), 0.0);
        if (fill_ratio(s.nonZeros()) <= kSparseFill) {
            s.makeCompressed();
            matrix_ = std::move(s);
        } else {
            matrix_ = std::move(matrix);
        }
        if (hermitian_) validate_hermitian();
    }

    static LinearOperator identity(const HilbertConfig& config) {
        CSparse id(static_cast<Eigen::Index>(config.dimension()), static_cast<Eigen::Index>(config.dimension()));
        id.setIdentity();
        return LinearOperator(config, std::move(id), true);
    }

    const HilbertConfig& config() const { return config_; }
    bool hermitian() const { return hermitian_; }
    bool is_sparse() const { return std::holds_alternative<CSparse>(matrix_); }

    CSparse sparse() const {
        if (is_sparse()) return std::get<CSparse>(matrix_);
        CSparse s = std::get<CMatrix>(matrix_).sparseView(Complex(0.0), 0.0);
        s.makeCompressed();
        return s;
    }
    CMatrix dense() const {
        if (is_sparse()) return CMatrix(std::get<CSparse>(matrix_));
        return std::get<CMatrix>(matrix_);
    }

    /// max |A - A^dagger| over all entries.
    double hermiticity_error() const {
        if (is_sparse()) {
            const CSparse& s = std::get<CSparse>(matrix_);
            CSparse diff = s - CSparse(s.adjoint());
            double worst = 0.0;
            for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
                for (CSparse::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
            return worst;
        }
        const CMatrix& d = std::get<CMatrix>(matrix_);
        return (d - d.adjoint()).cwiseAbs().maxCoeff();
    }

    /// Copy flagged hermitian; throws if the matrix is not.
    LinearOperator as_hermitian() const {
        LinearOperator copy = *this;
        copy.hermitian_ = true;
        copy.validate_hermitian();
        return copy;
    }

    LinearOperator adjoint() const {
        if (is_sparse()) return LinearOperator(config_, CSparse(std::get<CSparse>(matrix_).adjoint()), hermitian_);
        return LinearOperator(config_, CMatrix(std::get<CMatrix>(matrix_).adjoint()), hermitian_);
    }

    StateVector apply(const StateVector& state) const {
        require_same_config(config_, state.config(), "LinearOperator::apply");
        CVector out = is_sparse() ? CVector(std::get<CSparse>(matrix_) * state.amplitudes())
                                  : CVector(std::get<CMatrix>(matrix_) * state.amplitudes());
        return StateVector(config_, std::move(out));
    }
    StateVector operator()(const StateVector& state) const { return apply(state); }

    friend LinearOperator operator+(const LinearOperator& a, const LinearOperator& b) {
        require_same_config(a.config_, b.config_, "LinearOperator::operator+");
        const bool herm = a.hermitian_ && b.hermitian_;
        if (a.is_sparse() && b.is_sparse())
            return LinearOperator(a.config_, CSparse(a.sparse() + b.sparse()), herm);
        return LinearOperator(a.config_, CMatrix(a.dense() + b.dense()), herm);
    }
    friend LinearOperator operator-(const LinearOperator& a, const LinearOperator& b) {
        return a + Complex(-1.0) * b;
    }
    friend LinearOperator operator*(const LinearOperator& a, const LinearOperator& b) {
        require_same_config(a.config_, b.config_, "LinearOperator::operator*");
        if (a.is_sparse() && b.is_sparse()) return LinearOperator(a.config_, CSparse(a.sparse() * b.sparse()));
        return LinearOperator(a.config_, CMatrix(a.dense() * b.dense()));
    }
    friend LinearOperator operator*(Complex s, const LinearOperator& a) {
        const bool herm = a.hermitian_ && s.imag() == 0.0;
        if (a.is_sparse()) return LinearOperator(a.config_, CSparse(s * a.sparse()), herm);
        return LinearOperator(a.config_, CMatrix(s * a.dense()), herm);
    }
    friend LinearOperator operator*(double s, const LinearOperator& a) { return Complex(s) * a; }

private:
    void check_shape(Eigen::Index rows, Eigen::Index cols) const {
        const auto dim = static_cast<Eigen::Index>(config_.dimension());
        if (rows != dim || cols != dim)
            throw std::invalid_argument("LinearOperator: matrix shape does not match configuration");
    }
    double fill_ratio(Eigen::Index nnz) const {
        const double dim = static_cast<double>(config_.dimension());
        return static_cast<double>(nnz) / (dim * dim);
    }
    void store(CSparse matrix) {
        if (fill_ratio(matrix.nonZeros()) <= kSparseFill) matrix_ = std::move(matrix);
        else matrix_ = CMatrix(matrix);
    }
    void validate_hermitian() const {
        const double err = hermiticity_error();
        if (err >= kHermitianTolerance)
            throw std::invalid_argument("LinearOperator: flagged hermitian but |A - A^dagger|_max = " +
                                        std::to_string(err));
    }

    HilbertConfig config_;
    std::variant<CSparse, CMatrix> matrix_;
    bool hermitian_ = false;
};

inline void require_mode(const HilbertConfig& config, int mode, const char* where) {
    if (mode < 0 || mode >= config.mode_count())
        throw std::out_of_range(std::string(where) + ": mode index " + std::to_string(mode) + " out of range");
}

/// Ladder operator a_mode: <..,m-1,..|a|..,m,..> = sqrt(m).
inline LinearOperator annihilator(const HilbertConfig& config, int mode) {
    require_mode(config, mode, "annihilator");
    const std::size_t stride = config.mode_stride(mode);
    std::vector<Eigen::Triplet<Complex>> entries;
    entries.reserve(config.dimension());
    for (std::size_t i = 0; i < config.dimension(); ++i) {
        const int m = config.count(i, mode);
        if (m > 0)
            entries.emplace_back(static_cast<Eigen::Index>(i - stride), static_cast<Eigen::Index>(i),
                                 std::sqrt(static_cast<double>(m)));
    }
    const auto dim = static_cast<Eigen::Index>(config.dimension());
    CSparse a(dim, dim);
    a.setFromTriplets(entries.begin(), entries.end());
    return LinearOperator(config, std::move(a));
}

inline LinearOperator creator(const HilbertConfig& config, int mode) { return annihilator(config, mode).adjoint(); }

inline LinearOperator number_operator(const HilbertConfig& config, int mode) {
    require_mode(config, mode, "number_operator");
    const auto dim = static_cast<Eigen::Index>(config.dimension());
    CSparse n(dim, dim);
    std::vector<Eigen::Triplet<Complex>> entries;
    for (std::size_t i = 0; i < config.dimension(); ++i) {
        const int m = config.count(i, mode);
        if (m > 0) entries.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i), double(m));
    }
    n.setFromTriplets(entries.begin(), entries.end());
    return LinearOperator(config, std::move(n), true);
}

inline LinearOperator total_number_operator(const HilbertConfig& config) {
    LinearOperator total = number_operator(config, 0);
    for (int k = 1; k < config.mode_count(); ++k) total = total + number_operator(config, k);
    return total;
}

/// Dimensionless field at the emitter: E = sum_j (a_j + a_j^dagger).
inline LinearOperator field_operator(const HilbertConfig& config) {
    LinearOperator a = annihilator(config, 0);
    for (int k = 1; k < config.mode_count(); ++k) a = a + annihilator(config, k);
    return (a + a.adjoint()).as_hermitian();
}

enum class AtomOp {
    raise,             // |e><g| (|e><g1| for a Lambda atom)
    lower,             // |g><e|
    excited_projector, // |e><e|
    ground_projector,  // |g><g| (|g1><g1|)
    g2_projector,      // |g2><g2|
    g1_from_g2,        // |g1><g2|
    g2_from_g1,        // |g2><g1|
};

/// Atomic operator extended as identity over the modes.
inline LinearOperator atom_operator(const HilbertConfig& config, AtomOp kind) {
    if (config.atom_levels() < 2) throw std::invalid_argument("atom_operator: configuration has no atom");
    const bool lambda_only = kind == AtomOp::g2_projector || kind == AtomOp::g1_from_g2 || kind == AtomOp::g2_from_g1;
    if (lambda_only && config.atom_levels() < 3)
        throw std::invalid_argument("atom_operator: Lambda-system operator requested on a two-level atom");
    const int g1 = 0;
    const int g2 = 1;
    const int e = config.excited_level();
    int to = 0;
    int from = 0;
    switch (kind) {
        case AtomOp::raise: to = e; from = g1; break;
        case AtomOp::lower: to = g1; from = e; break;
        case AtomOp::excited_projector: to = e; from = e; break;
        case AtomOp::ground_projector: to = g1; from = g1; break;
        case AtomOp::g2_projector: to = g2; from = g2; break;
        case AtomOp::g1_from_g2: to = g1; from = g2; break;
        case AtomOp::g2_from_g1: to = g2; from = g1; break;
    }
    const std::size_t block = config.field_dimension();
    const auto dim = static_cast<Eigen::Index>(config.dimension());
    std::vector<Eigen::Triplet<Complex>> entries;
    entries.reserve(block);
    for (std::size_t f = 0; f < block; ++f)
        entries.emplace_back(static_cast<Eigen::Index>(static_cast<std::size_t>(to) * block + f),
                             static_cast<Eigen::Index>(static_cast<std::size_t>(from) * block + f), 1.0);
    CSparse op(dim, dim);
    op.setFromTriplets(entries.begin(), entries.end());
    return LinearOperator(config, std::move(op), to == from);
}

/// a_mode^dagger applied with explicit truncation bookkeeping: components
/// already at the cutoff are dropped and their would-be squared norm
/// ((n_max+1)|c|^2) is added to the result's leakage.
inline StateVector apply_creator(const StateVector& state, int mode) {
    const HilbertConfig& config = state.config();
    require_mode(config, mode, "apply_creator");
    const std::size_t stride = config.mode_stride(mode);
    const CVector& in = state.amplitudes();
    CVector out = CVector::Zero(in.size());
    double lost = 0.0;
    for (std::size_t i = 0; i < config.dimension(); ++i) {
        const Complex c = in(static_cast<Eigen::Index>(i));
        if (c == Complex(0.0)) continue;
        const int m = config.count(i, mode);
        const double factor = std::sqrt(static_cast<double>(m + 1));
        if (m == config.cutoff()) {
            lost += std::norm(c) * factor * factor;
        } else {
            out(static_cast<Eigen::Index>(i + stride)) += factor * c;
        }
    }
    return StateVector(config, std::move(out), state.leakage() + lost);
}

inline Complex inner(const StateVector& phi, const StateVector& psi) {
    require_same_config(phi.config(), psi.config(), "inner");
    return phi.amplitudes().dot(psi.amplitudes());
}

/// <psi|A|psi>; for operators flagged hermitian only the real part is kept.
inline Complex expectation(const StateVector& state, const LinearOperator& op) {
    require_same_config(state.config(), op.config(), "expectation");
    const Complex value = inner(state, op.apply(state));
    return op.hermitian() ? Complex(value.real(), 0.0) : value;
}

/// |<phi|psi>|^2 / (|phi|^2 |psi|^2); insensitive to global phase.
inline double fidelity(const StateVector& phi, const StateVector& psi) {
    const double denom = phi.norm_squared() * psi.norm_squared();
    if (denom == 0.0) throw std::domain_error("fidelity: zero-norm state");
    return std::norm(inner(phi, psi)) / denom;
}

/// Weight of a coherent amplitude |alpha| beyond occupation `cutoff`:
/// sum_{m > cutoff} e^{-|alpha|^2} |alpha|^{2m} / m!.
inline double coherent_tail_weight(double abs_alpha, int cutoff) {
    const double x = abs_alpha * abs_alpha;
    if (x == 0.0) return 0.0;
    // log of the first neglected term, then sum the series forward
    double log_term = -x + (cutoff + 1) * std::log(x) - std::lgamma(static_cast<double>(cutoff) + 2.0);
    double term = std::exp(log_term);
    double sum = 0.0;
    for (int m = cutoff + 1; m < cutoff + 2000; ++m) {
        sum += term;
        term *= x / static_cast<double>(m + 1);
        if (term < sum * 1e-17 || term == 0.0) break;
    }
    return sum;
}

/// Smallest per-mode cutoff whose neglected coherent weight is below `tolerance`.
inline int cutoff_for_coherent(double abs_alpha, double tolerance = 1e-12) {
    int n = 0;
    while (coherent_tail_weight(abs_alpha, n) >= tolerance) {
        ++n;
        if (n > 10000) throw std::runtime_error("cutoff_for_coherent: amplitude too large");
    }
    return n;
}

/// Embed a field-only state into a configuration with an atom in `level`.
inline StateVector with_atom(const StateVector& field, int atom_levels, int level) {
    if (field.config().has_atom()) throw std::invalid_argument("with_atom: state already carries an atom");
    HilbertConfig joint = field.config().with_atom_levels(atom_levels);
    if (level < 0 || level >= atom_levels) throw std::out_of_range("with_atom: atom level out of range");
    CVector v = CVector::Zero(static_cast<Eigen::Index>(joint.dimension()));
    v.segment(static_cast<Eigen::Index>(static_cast<std::size_t>(level) * joint.field_dimension()),
              static_cast<Eigen::Index>(joint.field_dimension())) = field.amplitudes();
    return StateVector(joint, std::move(v), field.leakage());
}

/// Field amplitudes of atom level `level` (an unnormalized slice).
inline StateVector atom_component(const StateVector& state, int level) {
    const HilbertConfig& config = state.config();
    if (level < 0 || level >= config.atom_levels()) throw std::out_of_range("atom_component: atom level out of range");
    CVector v = state.amplitudes().segment(
        static_cast<Eigen::Index>(static_cast<std::size_t>(level) * config.field_dimension()),
        static_cast<Eigen::Index>(config.field_dimension()));
    return StateVector(config.field_only(), std::move(v));
}

/// `count` equally spaced points on [lo, hi], endpoints included.
inline std::vector<double> linear_grid(double lo, double hi, int count) {
    if (count < 1) throw std::invalid_argument("linear_grid: need at least one point");
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k)
        grid[static_cast<std::size_t>(k)] = count == 1 ? lo : lo + (hi - lo) * k / (count - 1);
    return grid;
}

}  // namespace brightdark
