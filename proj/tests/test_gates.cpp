#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "brightdark/gates.hpp"
#include "oracles.hpp"

using namespace brightdark;

namespace {
const double kPi = std::numbers::pi;
}

TEST(GateParams, DerivedQuantities) {
    const GateParams p = GateParams::from_xi(1.0, 50.0, kPi);
    EXPECT_NEAR(p.time, 25.0 * kPi, 1e-12);
    EXPECT_NEAR(p.xi(), kPi, 1e-15);
    EXPECT_NEAR(p.theta(), kPi / 2, 1e-15);
    EXPECT_TRUE(p.warnings().empty());
    EXPECT_EQ(GateParams::from_xi(1.0, 5.0, kPi).warnings().size(), 1u);
    EXPECT_THROW(GateParams(1.0, 0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(GateParams(1.0, 10.0, -1.0), std::invalid_argument);
    EXPECT_THROW(GateParams::from_xi(0.0, 10.0, 1.0), std::invalid_argument);
}

TEST(WrapPhase, Range) {
    EXPECT_DOUBLE_EQ(wrap_phase(kPi), kPi);
    EXPECT_DOUBLE_EQ(wrap_phase(-kPi), kPi);
    EXPECT_NEAR(wrap_phase(3 * kPi / 2), -kPi / 2, 1e-15);
    EXPECT_NEAR(wrap_phase(0.3), 0.3, 1e-16);
}

TEST(EffectiveCphase, Action) {
    const HilbertConfig c = gate_config();
    const GateParams p = GateParams::from_xi(1.0, 40.0, kPi);
    const LinearOperator h = effective_cphase(c, p);
    EXPECT_TRUE(h.hermitian());
    EXPECT_EQ(h.apply(logical_state(1, 1)).norm(), 0.0);
    EXPECT_LT(h.apply(logical_state(0, 0)).norm(), 1e-15);
    const StateVector bright = logical_state(0, 1);
    EXPECT_LT((h.apply(bright) - Complex(2.0 / 40.0) * bright).norm(), 1e-15);
    EXPECT_THROW(effective_cphase(HilbertConfig(2, 1, 2), p), std::invalid_argument);
    // commutes with total photon number
    const LinearOperator n = total_number_operator(c);
    EXPECT_LT((h * n - n * h).dense().cwiseAbs().maxCoeff(), 1e-15);
}

TEST(TruthTable, ControlledZ) {
    const auto table = cphase_truth_table(GateParams::from_xi(1.0, 50.0, kPi));
    ASSERT_EQ(table.size(), 4u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(table[i].fidelity, 1.0, 1e-12);
        EXPECT_NEAR(table[i].phase, 0.0, 1e-12);
    }
    EXPECT_EQ(table[3].atom, "g1");
    EXPECT_EQ(table[3].mode, "psi11");
    EXPECT_NEAR(std::abs(table[3].overlap + 1.0), 0.0, 1e-12);
    const Eigen::Matrix4cd m = logical_matrix(table);
    Eigen::Matrix4cd cz = Eigen::Matrix4cd::Identity();
    cz(3, 3) = -1.0;
    EXPECT_LT((m - cz).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(TruthTable, IdentityAndQuarterTurn) {
    for (const auto& e : cphase_truth_table(GateParams::from_xi(1.0, 50.0, 0.0))) {
        EXPECT_NEAR(e.fidelity, 1.0, 1e-15);
        EXPECT_NEAR(std::abs(e.overlap - 1.0), 0.0, 1e-15);
    }
    const auto half = cphase_truth_table(GateParams::from_xi(1.0, 50.0, kPi / 2));
    EXPECT_NEAR(std::abs(half[3].overlap + kI), 0.0, 1e-12);
    EXPECT_NEAR(half[3].phase, -kPi / 2, 1e-12);
}

TEST(ModeRotation, BrightToDark) {
    const HilbertConfig c(2, 1);
    const StateVector bright = collective_state(c, 1, 1);
    const StateVector dark = collective_state(c, 1, 0);
    const StateVector out = mode_rotation(bright, kPi / 2);
    EXPECT_NEAR(fidelity(out, dark), 1.0, 1e-12);
    EXPECT_LT((mode_rotation(bright, 0.0).amplitudes() - bright.amplitudes()).norm(), 1e-15);
    const StateVector quarter = mode_rotation(bright, kPi / 4);
    EXPECT_NEAR(std::norm(inner(bright, quarter)), 0.5, 1e-12);
    EXPECT_NEAR(std::norm(inner(dark, quarter)), 0.5, 1e-12);
}

TEST(ModeRotation, ClosedForm) {
    const HilbertConfig c(2, 1);
    const StateVector bright = collective_state(c, 1, 1);
    const StateVector dark = collective_state(c, 1, 0);
    for (double theta : {0.2, 1.0, 2.5}) {
        const StateVector expected = std::exp(-kI * theta) * (Complex(std::cos(theta)) * bright -
                                                              kI * std::sin(theta) * dark);
        EXPECT_LT((mode_rotation(bright, theta).amplitudes() - expected.amplitudes()).norm(), 1e-14);
    }
}

TEST(ModeRotation, Composition) {
    const HilbertConfig c(2, 2);
    const StateVector s = Complex(0.6) * collective_state(c, 1, 1) + Complex(0.0, 0.8) * collective_state(c, 1, 0);
    const StateVector twice = mode_rotation(mode_rotation(s, 0.3), 0.9);
    EXPECT_NEAR(fidelity(twice, mode_rotation(s, 1.2)), 1.0, 1e-12);
    EXPECT_THROW(mode_rotation(collective_state(c, 2, 1), 0.1), std::invalid_argument);
    EXPECT_THROW(mode_rotation(StateVector::fock(HilbertConfig(3, 1), {1, 0, 0}), 0.1), std::invalid_argument);
}

TEST(Raman, TransfersG2ToG1) {
    const double omega = 0.8;
    const StateVector in = logical_state(1, 1);
    const StateVector out = raman_rotation(in, omega, kPi / omega);
    EXPECT_NEAR(fidelity(out, logical_state(0, 1)), 1.0, 1e-12);
    EXPECT_THROW(raman_hamiltonian(HilbertConfig(2, 1, 2), 1.0), std::invalid_argument);
}

TEST(ValidateEffective, LeakageBoundAndDarkInput) {
    const DispersiveCheck check = validate_effective(GateParams::from_xi(1.0, 50.0, kPi));
    EXPECT_LT(check.peak_leakage, 3.2e-3);
    EXPECT_LE(check.final_leakage, check.peak_leakage);
    EXPECT_NEAR(check.dark_fidelity, 1.0, 1e-10);
    EXPECT_LT(std::abs(check.phase_error), 0.01);
    EXPECT_NEAR(check.target_phase, kPi, 1e-12);
}

TEST(ValidateEffective, PeakMatchesTwoLevelOracle) {
    // |g1>|psi11> couples to |e>|0> with strength g sqrt2 and detuning -Delta
    const GateParams p = GateParams::from_xi(1.0, 20.0, kPi);
    const DispersiveCheck check = validate_effective(p, 64);
    double peak = 0.0;
    for (int k = 0; k <= 20000; ++k)
        peak = std::max(peak, oracle::two_level_excitation(std::sqrt(2.0), -20.0, p.time * k / 20000.0));
    EXPECT_NEAR(check.peak_leakage, peak, 1e-6);
    EXPECT_NEAR(check.final_leakage, oracle::two_level_excitation(std::sqrt(2.0), -20.0, p.time), 1e-12);
}

TEST(ValidateEffective, QuadraticScaling) {
    const ScalingReport r = validate_scaling(1.0, kPi, 50.0, 100.0);
    EXPECT_TRUE(r.scales(1.5));
    EXPECT_NEAR(r.expected_ratio, 0.25, 1e-15);
    EXPECT_NEAR(r.phase_error_ratio, 0.25, 0.25 * 0.5);
}
