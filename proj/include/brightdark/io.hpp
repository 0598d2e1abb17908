// io.hpp - CSV and JSON serialization of scans, time series, decompositions
// and gate reports. Numbers are written with 17 significant digits so that
// identical runs produce byte-identical files.

#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "brightdark/collective.hpp"
#include "brightdark/dynamics.hpp"
#include "brightdark/gates.hpp"
#include "brightdark/interferometer.hpp"

namespace brightdark::io {

using nlohmann::json;

inline std::string format_double(double x) {
    if (x == 0.0) return "0";  // folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_fringe_csv(std::ostream& out, const FringeScan& scan) {
    out << "phi,nA,nB\n";
    for (std::size_t i = 0; i < scan.phi.size(); ++i)
        out << format_double(scan.phi[i]) << ',' << format_double(scan.n_a[i]) << ',' << format_double(scan.n_b[i])
            << '\n';
}

/// Columns: t, then channels in series order (sigma_ee, nA, nB, n_bright,
/// n_dark[, alpha_c_re, alpha_c_im]).
inline void write_timeseries_csv(std::ostream& out, const TimeSeries& series) {
    out << 't';
    for (const std::string& name : series.names()) out << ',' << name;
    out << '\n';
    std::vector<const std::vector<double>*> columns;
    for (const std::string& name : series.names()) columns.push_back(&series.channel(name));
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << format_double(series.times()[i]);
        for (const auto* column : columns) out << ',' << format_double((*column)[i]);
        out << '\n';
    }
}

inline json to_json(const FringeScan& scan) {
    return json{{"points", scan.phi.size()},
                {"visibility_A", scan.visibility_a},
                {"visibility_B", scan.visibility_b},
                {"phi_min", scan.phi.front()},
                {"phi_max", scan.phi.back()},
                {"leakage", scan.leakage}};
}

inline json to_json(const CollectiveDecomposition& d) {
    json entries = json::array();
    for (const auto& e : d.entries)
        entries.push_back(json{{"N", e.index.total()},
                               {"n", e.index.occupations},
                               {"re", e.amplitude.real()},
                               {"im", e.amplitude.imag()}});
    return json{{"entries", entries},
                {"residual", d.residual},
                {"norm_squared", d.norm_squared},
                {"vacuum_weight", d.vacuum_weight},
                {"dark_weight", d.dark_weight},
                {"mss_weight", d.mss_weight},
                {"intermediate_weight", d.intermediate_weight},
                {"non_dark_weight", d.non_dark_weight()},
                {"non_mss_weight", d.non_mss_weight()}};
}

inline json to_json(const SystemParams& p) {
    return json{{"g", p.g}, {"gamma", p.gamma}, {"kappa", p.kappa}, {"detuning", p.detuning}, {"mode_count", p.mode_count}};
}

inline json to_json(const GateParams& p) {
    return json{{"g", p.g}, {"detuning", p.detuning}, {"time", p.time}, {"xi", p.xi()}, {"theta", p.theta()}};
}

inline json to_json(const std::vector<TruthTableEntry>& table) {
    json rows = json::array();
    for (const auto& e : table)
        rows.push_back(json{{"atom", e.atom},
                            {"mode", e.mode},
                            {"overlap_re", e.overlap.real()},
                            {"overlap_im", e.overlap.imag()},
                            {"phase", e.phase},
                            {"fidelity", e.fidelity}});
    return rows;
}

inline json to_json(const DispersiveCheck& c) {
    return json{{"delta_over_g", c.delta_over_g},
                {"gate_time", c.gate_time},
                {"target_phase", c.target_phase},
                {"phase", c.phase},
                {"phase_error", c.phase_error},
                {"peak_leakage", c.peak_leakage},
                {"final_leakage", c.final_leakage},
                {"leakage_bound", c.leakage_bound},
                {"dark_fidelity", c.dark_fidelity},
                {"warnings", c.warnings}};
}

inline json to_json(const ScalingReport& r) {
    return json{{"xi", r.xi},
                {"checks", json::array({to_json(r.first), to_json(r.second)})},
                {"leakage_ratio", r.leakage_ratio},
                {"expected_ratio", r.expected_ratio},
                {"phase_error_ratio", r.phase_error_ratio},
                {"scales_within_1_5", r.scales(1.5)}};
}

}  // namespace brightdark::io
