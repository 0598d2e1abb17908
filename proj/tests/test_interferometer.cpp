#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "brightdark/interferometer.hpp"
#include "brightdark/states.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace brightdark;

namespace {
const double kPi = std::numbers::pi;

double correlation_ab(const StateVector& s) {
    double total = 0.0;
    for (std::size_t i = 0; i < s.dimension(); ++i)
        total += std::norm(s.amplitude(i)) * s.config().count(i, 0) * s.config().count(i, 1);
    return total;
}
}  // namespace

TEST(BeamSplitter, MatchesMatrixExponential) {
    const int cutoff = 6;
    const HilbertConfig c(2, cutoff);
    const CMatrix u = oracle::beam_splitter(cutoff);
    std::mt19937 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        // below the edge the exponential is exact within the truncated space
        const StateVector s = support::random_low_photon_state(c, cutoff, rng);
        const StateVector out = beam_splitter(s);
        EXPECT_LT((out.amplitudes() - u * s.amplitudes()).norm(), 1e-12);
        EXPECT_NEAR(out.leakage(), 0.0, 1e-14);
    }
}

TEST(BeamSplitter, VacuumAndHongOuMandel) {
    const HilbertConfig c(2, 2);
    EXPECT_NEAR(fidelity(beam_splitter(vacuum(c)), vacuum(c)), 1.0, 1e-15);
    const StateVector out = beam_splitter(StateVector::fock(c, {1, 1}));
    EXPECT_LT(correlation_ab(out), 1e-12);
    CVector expected = CVector::Zero(9);
    expected(static_cast<Eigen::Index>(c.index(Occupation{{2, 0}, 0}))) = -kI / std::sqrt(2.0);
    expected(static_cast<Eigen::Index>(c.index(Occupation{{0, 2}, 0}))) = -kI / std::sqrt(2.0);
    EXPECT_NEAR(fidelity(out, StateVector(c, expected)), 1.0, 1e-14);
}

TEST(BeamSplitter, ConservesPhotonNumberAndNorm) {
    const HilbertConfig c(2, 5);
    std::mt19937 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        const StateVector s = support::random_low_photon_state(c, 5, rng);
        const StateVector out = beam_splitter(s);
        EXPECT_NEAR(out.norm(), 1.0, 1e-12);
        EXPECT_NEAR(mode_populations(out).total(), mode_populations(s).total(), 1e-12);
    }
}

TEST(BeamSplitter, OverflowBecomesLeakage) {
    const HilbertConfig c(2, 1);
    const StateVector out = beam_splitter(StateVector::fock(c, {1, 1}));
    EXPECT_NEAR(out.norm_squared(), 0.0, 1e-15);
    EXPECT_NEAR(out.leakage(), 1.0, 1e-15);
    EXPECT_THROW(beam_splitter(StateVector::fock(HilbertConfig(3, 1), {0, 0, 0})), std::invalid_argument);
}

TEST(BeamSplitter, AtomUntouched) {
    const HilbertConfig c(2, 2, 2);
    const StateVector in = StateVector::fock(c, {1, 0}, 1);
    const StateVector out = beam_splitter(in);
    EXPECT_NEAR(atom_component(out, 1).norm_squared(), 1.0, 1e-15);
    EXPECT_NEAR(atom_component(out, 0).norm_squared(), 0.0, 1e-15);
}

TEST(PhaseShifter, Examples) {
    const HilbertConfig c(2, 2);
    EXPECT_NEAR(std::abs(phase_shifter(StateVector::fock(c, {0, 1}), kPi)[Occupation({{0, 1}, 0})] + 1.0), 0.0,
                1e-15);
    const double phi = 0.77;
    EXPECT_NEAR(std::abs(phase_shifter(StateVector::fock(c, {1, 1}), phi)[Occupation({{1, 1}, 0})] -
                         std::exp(kI * phi)),
                0.0, 1e-15);
    const StateVector u = upsilon(c);
    EXPECT_NEAR((phase_shifter(u, 0.0).amplitudes() - u.amplitudes()).norm(), 0.0, 0.0);
}

TEST(Mzi, UpsilonFringe) {
    const HilbertConfig c(2, 2);
    const StateVector u = upsilon(c);
    for (double phi : linear_grid(0.0, 2 * kPi, 101)) {
        const ArmIntensities i = mzi_intensities(u, phi);
        EXPECT_NEAR(i.a, 0.25 * (2.0 - std::sin(phi)), 1e-12);
        EXPECT_NEAR(i.b, 0.25 * (2.0 + std::sin(phi)), 1e-12);
        EXPECT_NEAR(mzi(u, phi).norm(), 1.0, 1e-12);
    }
    const FringeScan scan = fringe_scan(u, linear_grid(0.0, 2 * kPi, 101));
    EXPECT_NEAR(scan.visibility_a, 0.5, 1e-3);
    EXPECT_NEAR(*std::min_element(scan.n_a.begin(), scan.n_a.end()), 0.25, 1e-3);
}

TEST(Mzi, CollectiveAndCoherentFringes) {
    const HilbertConfig c(2, 16);
    const double a = 1.0 / std::sqrt(2.0);
    const StateVector dark = coherent(c, CoherentSpec{{a, -a}});
    const StateVector flat = collective_state(c, 2, 1);
    for (double phi : {0.0, 0.4, kPi / 2, 2.0, 4.5}) {
        EXPECT_NEAR(mzi_intensities(dark, phi).a, 0.5 * (1.0 - std::sin(phi)), 1e-10);
        EXPECT_NEAR(mzi_intensities(dark, phi).b, 0.5 * (1.0 + std::sin(phi)), 1e-10);
        EXPECT_NEAR(mzi_intensities(flat, phi).a, 1.0, 1e-12);
    }
    EXPECT_NEAR(fringe_scan(flat, linear_grid(0, 2 * kPi, 51)).visibility_a, 0.0, 1e-12);
}

TEST(Mzi, QuantumMatchesClassicalOnPureSectors) {
    const HilbertConfig c(2, 6);
    // MSS <-> theta = 0, PDS <-> theta = pi; normalized fringe n_A / n_tot = I+ / (2 I_in)
    for (int total = 1; total <= 6; ++total)
        for (const auto& [n, theta] : {std::pair{total, 0.0}, std::pair{0, kPi}}) {
            const StateVector s = collective_state(c, total, n);
            for (double phi : linear_grid(0, 2 * kPi, 13)) {
                const ArmIntensities q = mzi_intensities(s, phi);
                const ArmIntensities k = classical_intensities_closed_form(theta, 1.0, phi);
                EXPECT_NEAR(q.a / q.total(), k.a / 2.0, 1e-9);
            }
        }
}

TEST(Classical, ClosedFormAnchors) {
    const double i_in = 0.5;
    auto check = [&](double theta, double phi) {
        const ArmIntensities num = classical_intensities(ClassicalField::from_phase(theta, i_in), phi);
        const ArmIntensities closed = classical_intensities_closed_form(theta, i_in, phi);
        EXPECT_NEAR(num.a, closed.a, 1e-14);
        EXPECT_NEAR(num.b, closed.b, 1e-14);
        return num;
    };
    const ArmIntensities in_phase = check(0.0, kPi / 2);
    EXPECT_NEAR(in_phase.a, 2 * i_in, 1e-14);
    EXPECT_NEAR(in_phase.b, 0.0, 1e-14);
    const ArmIntensities out_of_phase = check(kPi, kPi / 2);
    EXPECT_NEAR(out_of_phase.a, 0.0, 1e-14);
    const ArmIntensities quadrature = check(kPi / 2, 1.234);
    EXPECT_NEAR(quadrature.a, i_in, 1e-14);
    EXPECT_NEAR(quadrature.b, i_in, 1e-14);
    for (double theta : {0.3, 1.7, 2.9})
        for (double phi : {0.1, 2.2, 5.0}) check(theta, phi);
}

TEST(Classical, ArmLabelsAgreeWithQuantum) {
    // a coherent input is the quantum counterpart of a classical field
    const HilbertConfig c(2, 14);
    const double theta = 0.8;
    const ClassicalField f = ClassicalField::from_phase(theta, 0.3);
    const StateVector q = coherent(c, CoherentSpec{{f.a, f.b}});
    for (double phi : {0.2, 1.3, 3.9}) {
        EXPECT_NEAR(mzi_intensities(q, phi).a, classical_intensities(f, phi).a, 1e-10);
        EXPECT_NEAR(mzi_intensities(q, phi).b, classical_intensities(f, phi).b, 1e-10);
    }
}

TEST(Visibility, Definition) {
    EXPECT_DOUBLE_EQ(visibility({0.25, 0.75, 0.5}), 0.5);
    EXPECT_DOUBLE_EQ(visibility({0.0, 0.0}), 0.0);
    EXPECT_DOUBLE_EQ(visibility({1.0, 1.0}), 0.0);
    EXPECT_THROW(visibility({}), std::invalid_argument);
    EXPECT_THROW(fringe_scan(upsilon(HilbertConfig(2, 1)), {}), std::invalid_argument);
    EXPECT_THROW(linear_grid(0, 1, 0), std::invalid_argument);
}
