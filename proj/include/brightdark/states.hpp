// states.hpp - Named field states and field moments.

#pragma once

#include <cctype>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "brightdark/collective.hpp"
#include "brightdark/fock.hpp"

namespace brightdark {

/// Per-mode coherent amplitudes. `tolerance` bounds the acceptable neglected
/// weight per mode after truncation at the configuration cutoff.
struct CoherentSpec {
    std::vector<Complex> amplitudes;
    double tolerance = 1e-12;
};

/// Neglected weight per mode and the joint weight 1 - prod_j (1 - tail_j).
struct TruncationReport {
    std::vector<double> per_mode;
    double total = 0.0;
    bool within(double tolerance) const {
        for (double w : per_mode)
            if (w >= tolerance) return false;
        return true;
    }
};

inline TruncationReport coherent_truncation(const HilbertConfig& config, const CoherentSpec& spec) {
    TruncationReport report;
    double kept = 1.0;
    for (const Complex& alpha : spec.amplitudes) {
        const double tail = coherent_tail_weight(std::abs(alpha), config.cutoff());
        report.per_mode.push_back(tail);
        kept *= 1.0 - tail;
    }
    report.total = 1.0 - kept;
    return report;
}

inline StateVector vacuum(const HilbertConfig& config) {
    return StateVector::fock(config, std::vector<int>(static_cast<std::size_t>(config.mode_count()), 0));
}

/// Truncated product of coherent states, renormalized; the dropped weight is
/// stored as the state's leakage. The atom (if any) is in level 0.
inline StateVector coherent(const HilbertConfig& config, const CoherentSpec& spec) {
    if (static_cast<int>(spec.amplitudes.size()) != config.mode_count())
        throw std::invalid_argument("coherent: need one amplitude per mode");
    const int local = config.local_dimension();
    std::vector<std::vector<Complex>> per_mode;
    for (const Complex& alpha : spec.amplitudes) {
        std::vector<Complex> c(static_cast<std::size_t>(local));
        c[0] = std::exp(-0.5 * std::norm(alpha));
        for (int m = 1; m < local; ++m)
            c[static_cast<std::size_t>(m)] = c[static_cast<std::size_t>(m - 1)] * alpha / std::sqrt(double(m));
        per_mode.push_back(std::move(c));
    }
    CVector v = CVector::Zero(static_cast<Eigen::Index>(config.dimension()));
    for (std::size_t i = 0; i < config.field_dimension(); ++i) {
        Complex amp = 1.0;
        for (int k = 0; k < config.mode_count(); ++k)
            amp *= per_mode[static_cast<std::size_t>(k)][static_cast<std::size_t>(config.count(i, k))];
        v(static_cast<Eigen::Index>(i)) = amp;
    }
    v /= v.norm();
    return StateVector(config, std::move(v), coherent_truncation(config, spec).total);
}

/// |Upsilon> = 1/2 (|0> + |1>)_A (|0> - |1>)_B.
inline StateVector upsilon(const HilbertConfig& config) {
    if (config.mode_count() != 2) throw std::invalid_argument("upsilon: two-mode configuration required");
    if (config.cutoff() < 1) throw std::invalid_argument("upsilon: cutoff must be at least 1");
    CVector v = CVector::Zero(static_cast<Eigen::Index>(config.dimension()));
    auto at = [&](int a, int b) -> Complex& { return v(static_cast<Eigen::Index>(config.index(Occupation{{a, b}, 0}))); };
    at(0, 0) = 0.5;
    at(0, 1) = -0.5;
    at(1, 0) = 0.5;
    at(1, 1) = -0.5;
    return StateVector(config, std::move(v));
}

/// cos(dphi/2) psi^1_1 - i sin(dphi/2) psi^1_0.
inline StateVector single_photon_slit(const HilbertConfig& config, double dphi) {
    if (config.mode_count() != 2) throw std::invalid_argument("single_photon_slit: two-mode configuration required");
    if (config.cutoff() < 1) throw std::invalid_argument("single_photon_slit: cutoff must be at least 1");
    return Complex(std::cos(dphi / 2)) * collective_state(config, 1, 1) -
           kI * std::sin(dphi / 2) * collective_state(config, 1, 0);
}

/// Coherent fields e^{i k r1} alpha and e^{i k r2} alpha arriving from two slits.
inline StateVector slit_coherent(const HilbertConfig& config, Complex alpha, double kr1, double kr2) {
    if (config.mode_count() != 2) throw std::invalid_argument("slit_coherent: two-mode configuration required");
    return coherent(config, CoherentSpec{{std::exp(kI * kr1) * alpha, std::exp(kI * kr2) * alpha}});
}

/// <E> with E = sum_j (a_j + a_j^dagger).
inline double field_mean(const StateVector& state) {
    return expectation(state, field_operator(state.config())).real();
}

/// <E^2> - <E>^2, with <E^2> evaluated as |E psi|^2.
inline double field_variance(const StateVector& state) {
    const StateVector e_psi = field_operator(state.config()).apply(state);
    const double mean = inner(state, e_psi).real();
    return e_psi.norm_squared() - mean * mean;
}

namespace detail {

inline std::string normalize_minus(std::string s) {
    // accept U+2212 MINUS SIGN as '-'
    const std::string minus = "\xE2\x88\x92";
    for (auto pos = s.find(minus); pos != std::string::npos; pos = s.find(minus)) s.replace(pos, minus.size(), "-");
    return s;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

inline double parse_number(const std::string& text) {
    std::string t;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    if (t.empty()) throw std::invalid_argument("empty number");
    // "pi", "-pi", "2pi", "pi/2", "3pi/4"
    const auto pi_pos = t.find("pi");
    if (pi_pos != std::string::npos) {
        std::string head = t.substr(0, pi_pos);
        std::string tail = t.substr(pi_pos + 2);
        double factor = 1.0;
        if (head == "-") factor = -1.0;
        else if (!head.empty() && head != "+") factor = parse_number(head);
        double divisor = 1.0;
        if (!tail.empty()) {
            if (tail.front() != '/') throw std::invalid_argument("bad number '" + text + "'");
            divisor = parse_number(tail.substr(1));
        }
        return factor * std::numbers::pi / divisor;
    }
    std::size_t used = 0;
    const double value = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument("bad number '" + text + "'");
    return value;
}

inline int parse_int(const std::string& text) {
    std::size_t used = 0;
    const int value = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument("bad integer '" + text + "'");
    return value;
}

}  // namespace detail

/// Parsed form of a state string:
///   "vacuum", "upsilon", "coherent:re,im;re,im[;...]", "psi:N:n",
///   "slit-photon:dphi", "chi:N:dphi".
struct StateSpec {
    enum class Kind { vacuum, upsilon, coherent, psi, slit_photon, chi };
    Kind kind = Kind::vacuum;
    std::vector<Complex> amplitudes;  // coherent
    int total = 0;                    // psi, chi
    int bright = 0;                   // psi
    double phase = 0.0;               // slit-photon, chi
    std::string text;

    int mode_count() const { return kind == Kind::coherent ? static_cast<int>(amplitudes.size()) : 2; }
    /// Smallest per-mode cutoff that represents the state without leakage
    /// (for coherent states: neglected weight below `tolerance` per mode).
    int minimal_cutoff(double tolerance = 1e-12) const {
        switch (kind) {
            case Kind::vacuum: return 0;
            case Kind::upsilon:
            case Kind::slit_photon: return 1;
            case Kind::psi:
            case Kind::chi: return total;
            case Kind::coherent: {
                int n = 0;
                for (const Complex& a : amplitudes) n = std::max(n, cutoff_for_coherent(std::abs(a), tolerance));
                return n;
            }
        }
        return 0;
    }
};

inline StateSpec parse_state_spec(const std::string& raw) {
    const std::string text = detail::normalize_minus(raw);
    StateSpec spec;
    spec.text = text;
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string body = colon == std::string::npos ? std::string() : text.substr(colon + 1);
    try {
        if (head == "vacuum" && colon == std::string::npos) {
            spec.kind = StateSpec::Kind::vacuum;
        } else if (head == "upsilon" && colon == std::string::npos) {
            spec.kind = StateSpec::Kind::upsilon;
        } else if (head == "coherent" && !body.empty()) {
            spec.kind = StateSpec::Kind::coherent;
            for (const std::string& mode : detail::split(body, ';')) {
                const auto parts = detail::split(mode, ',');
                if (parts.size() == 1) spec.amplitudes.emplace_back(detail::parse_number(parts[0]), 0.0);
                else if (parts.size() == 2)
                    spec.amplitudes.emplace_back(detail::parse_number(parts[0]), detail::parse_number(parts[1]));
                else throw std::invalid_argument("bad coherent amplitude '" + mode + "'");
            }
        } else if (head == "psi") {
            spec.kind = StateSpec::Kind::psi;
            const auto parts = detail::split(body, ':');
            if (parts.size() != 2) throw std::invalid_argument("expected psi:N:n");
            spec.total = detail::parse_int(parts[0]);
            spec.bright = detail::parse_int(parts[1]);
            if (spec.total < 0 || spec.bright < 0 || spec.bright > spec.total)
                throw std::invalid_argument("psi:N:n needs 0 <= n <= N");
        } else if (head == "slit-photon") {
            spec.kind = StateSpec::Kind::slit_photon;
            spec.phase = detail::parse_number(body);
        } else if (head == "chi") {
            spec.kind = StateSpec::Kind::chi;
            const auto parts = detail::split(body, ':');
            if (parts.size() != 2) throw std::invalid_argument("expected chi:N:dphi");
            spec.total = detail::parse_int(parts[0]);
            spec.phase = detail::parse_number(parts[1]);
            if (spec.total < 0) throw std::invalid_argument("chi:N:dphi needs N >= 0");
        } else {
            throw std::invalid_argument("unknown state kind");
        }
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("bad state spec '" + raw + "': " + e.what());
    } catch (const std::out_of_range&) {
        throw std::invalid_argument("bad state spec '" + raw + "': number out of range");
    }
    return spec;
}

/// Build the field state described by `spec` on `config` (atom in level 0).
inline StateVector make_state(const HilbertConfig& config, const StateSpec& spec) {
    if (config.mode_count() != spec.mode_count())
        throw std::invalid_argument("make_state: '" + spec.text + "' needs " + std::to_string(spec.mode_count()) +
                                    " modes");
    switch (spec.kind) {
        case StateSpec::Kind::vacuum: return vacuum(config);
        case StateSpec::Kind::upsilon: return upsilon(config);
        case StateSpec::Kind::coherent: return coherent(config, CoherentSpec{spec.amplitudes});
        case StateSpec::Kind::psi: return collective_state(config, spec.total, spec.bright);
        case StateSpec::Kind::slit_photon: return single_photon_slit(config, spec.phase);
        case StateSpec::Kind::chi: return chi_state(config, spec.total, spec.phase);
    }
    throw std::logic_error("make_state: unhandled kind");
}

}  // namespace brightdark
