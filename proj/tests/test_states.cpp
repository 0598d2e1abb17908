#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "brightdark/dynamics.hpp"
#include "brightdark/states.hpp"

using namespace brightdark;

namespace {
const double kPi = std::numbers::pi;

double mode_mean_field(const StateVector& s) {
    double total = 0.0;
    for (int k = 0; k < s.config().mode_count(); ++k)
        total += 2.0 * expectation(s, annihilator(s.config(), k)).real();
    return total;
}

/// |H psi|g>| and the excited-state component of H psi|g>.
StateVector couple(const StateVector& field) {
    const StateVector joint = with_atom(field, 2, 0);
    return hamiltonian(joint.config(), SystemParams{1.0, 0.0, {0.0}, 0.0, field.config().mode_count()}).apply(joint);
}
}  // namespace

TEST(Coherent, ZeroAmplitudeIsVacuum) {
    const HilbertConfig c(2, 4);
    const StateVector s = coherent(c, CoherentSpec{{0.0, 0.0}});
    EXPECT_NEAR(fidelity(s, vacuum(c)), 1.0, 1e-15);
    EXPECT_EQ(s.leakage(), 0.0);
}

TEST(Coherent, EigenrelationAndLeakage) {
    const HilbertConfig c(2, 20);
    const Complex alpha(0.6, -0.3);
    const StateVector s = coherent(c, CoherentSpec{{alpha, -alpha}});
    EXPECT_NEAR(s.norm(), 1.0, 1e-12);
    const StateVector r = annihilator(c, 0).apply(s) - alpha * s;
    EXPECT_LT(r.norm(), 1e-9);
    EXPECT_LT(s.leakage(), 1e-20);
    const StateVector low = coherent(HilbertConfig(2, 2), CoherentSpec{{1.0, 1.0}});
    EXPECT_NEAR(low.leakage(), coherent_truncation(HilbertConfig(2, 2), CoherentSpec{{1.0, 1.0}}).total, 0.0);
    EXPECT_GT(low.leakage(), 0.1);
    EXPECT_FALSE(coherent_truncation(HilbertConfig(2, 2), CoherentSpec{{1.0, 1.0}}).within(1e-12));
}

TEST(Coherent, OutOfPhaseIsDarkInPhaseIsBright) {
    const HilbertConfig c(2, 20);
    const double a = 1.0 / std::sqrt(2.0);
    EXPECT_LT(couple(coherent(c, CoherentSpec{{a, -a}})).norm(), 1e-6);
    const StateVector bright = coherent(c, CoherentSpec{{a, a}});
    const StateVector expected = Complex(2.0 * a) * with_atom(bright, 2, 1);
    EXPECT_LT((couple(bright) - expected).norm(), 1e-6);
    EXPECT_THROW(coherent(c, CoherentSpec{{a}}), std::invalid_argument);
}

TEST(Coherent, FourModeAlternatingIsDark) {
    const HilbertConfig c(4, 6);
    const double a = 0.3;
    const StateVector dark = coherent(c, CoherentSpec{{a, -a, a, -a}});
    // truncation residual is set by the edge amplitude alpha c_6 of each mode
    const double edge = a * std::exp(-0.5 * a * a) * std::pow(a, 6) / std::sqrt(720.0);
    const double bound = 4.0 * edge * 1.01;
    EXPECT_LT(couple(dark).norm(), bound);
    const StateVector bright = coherent(c, CoherentSpec{{a, a, a, a}});
    EXPECT_LT((couple(bright) - Complex(4.0 * a) * with_atom(bright, 2, 1)).norm(), bound);
}

TEST(Upsilon, AmplitudesMeanVariance) {
    const HilbertConfig c(2, 3);
    const StateVector u = upsilon(c);
    EXPECT_NEAR(u.norm(), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(u[Occupation({{0, 1}, 0})].real(), -0.5);
    EXPECT_DOUBLE_EQ(u[Occupation({{1, 0}, 0})].real(), 0.5);
    EXPECT_NEAR(field_mean(u), 0.0, 1e-15);
    EXPECT_NEAR(field_variance(u), 2.0, 1e-12);
    EXPECT_GT(couple(u).norm(), 0.1);
    EXPECT_THROW(upsilon(HilbertConfig(2, 0)), std::invalid_argument);
    EXPECT_THROW(upsilon(HilbertConfig(3, 1)), std::invalid_argument);
}

TEST(Variance, CollectiveStates) {
    const HilbertConfig c(2, 7);
    for (int total = 0; total <= 6; ++total)
        for (int n = 0; n <= total; ++n) {
            const StateVector s = collective_state(c, total, n);
            EXPECT_NEAR(field_mean(s), 0.0, 1e-12);
            EXPECT_NEAR(field_variance(s), 2.0 * (2 * n + 1), 1e-10) << total << ' ' << n;
        }
    EXPECT_NEAR(field_variance(vacuum(c)), 2.0, 1e-14);
    const double a = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(field_variance(coherent(HilbertConfig(2, 20), CoherentSpec{{a, -a}})), 2.0, 1e-10);
}

TEST(Variance, MeanMatchesModeExpectations) {
    const HilbertConfig c(2, 12);
    for (const StateVector& s : {coherent(c, CoherentSpec{{Complex(0.4, 0.2), Complex(-0.1, 0.5)}}), upsilon(c),
                                 single_photon_slit(c, 0.9), chi_state(c, 3, 1.1)})
        EXPECT_NEAR(field_mean(s), mode_mean_field(s), 1e-12);
}

TEST(Slit, SinglePhoton) {
    const HilbertConfig c(2, 1);
    EXPECT_NEAR(fidelity(single_photon_slit(c, 0.0), collective_state(c, 1, 1)), 1.0, 1e-15);
    const StateVector pi = single_photon_slit(c, kPi);
    EXPECT_NEAR(fidelity(pi, collective_state(c, 1, 0)), 1.0, 1e-15);
    const CollectiveDecomposition d = decompose(single_photon_slit(c, kPi / 2));
    EXPECT_NEAR(d.dark_weight, 0.5, 1e-15);
    EXPECT_NEAR(d.mss_weight, 0.5, 1e-15);
    EXPECT_NEAR(single_photon_slit(c, 0.37).norm(), 1.0, 1e-15);
}

TEST(Slit, CoherentDecomposesOnChiStates) {
    const HilbertConfig c(2, 16);
    const CollectiveDecomposition same = decompose(slit_coherent(c, 0.5, 0.4, 0.4));
    EXPECT_LT(same.non_mss_weight(), 1e-10);
    const CollectiveDecomposition opposite = decompose(slit_coherent(c, 0.5, kPi, 0.0));
    EXPECT_LT(opposite.non_dark_weight(), 1e-10);
    // <chi^1(k(r2 - r1))|psi> = e^{-|alpha|^2} sqrt2 e^{i k r2} alpha
    const double kr1 = 0.3;
    const double kr2 = 1.1;
    const StateVector psi = slit_coherent(c, 1.0, kr1, kr2);
    const Complex overlap = inner(chi_state(c, 1, kr2 - kr1), psi);
    EXPECT_NEAR(std::abs(overlap - std::exp(-1.0) * std::sqrt(2.0) * std::exp(kI * kr2)), 0.0, 1e-12);
}

TEST(StateSpec, Parses) {
    EXPECT_EQ(parse_state_spec("vacuum").kind, StateSpec::Kind::vacuum);
    EXPECT_EQ(parse_state_spec("upsilon").kind, StateSpec::Kind::upsilon);
    const StateSpec coh = parse_state_spec("coherent:0.7071,0;\xE2\x88\x92" "0.7071,0");
    ASSERT_EQ(coh.amplitudes.size(), 2u);
    EXPECT_DOUBLE_EQ(coh.amplitudes[1].real(), -0.7071);
    const StateSpec psi = parse_state_spec("psi:2:1");
    EXPECT_EQ(psi.total, 2);
    EXPECT_EQ(psi.bright, 1);
    EXPECT_NEAR(parse_state_spec("slit-photon:pi/2").phase, kPi / 2, 1e-15);
    EXPECT_NEAR(parse_state_spec("chi:3:-pi").phase, -kPi, 1e-15);
    EXPECT_EQ(parse_state_spec("coherent:0.5;0.5;0.5").mode_count(), 3);
}

TEST(StateSpec, RejectsMalformed) {
    for (const char* bad : {"", "coherent", "coherent:", "psi:2", "psi:1:2", "psi:x:1", "chi:2", "slit-photon:abc",
                            "upsilon:1", "squeezed:1", "coherent:1,2,3", "psi:-1:0"})
        EXPECT_THROW(parse_state_spec(bad), std::invalid_argument) << bad;
}

TEST(StateSpec, MinimalCutoffAndBuild) {
    EXPECT_EQ(parse_state_spec("psi:4:2").minimal_cutoff(), 4);
    EXPECT_EQ(parse_state_spec("upsilon").minimal_cutoff(), 1);
    EXPECT_EQ(parse_state_spec("coherent:0.7071,0;-0.7071,0").minimal_cutoff(1e-12), 11);
    const HilbertConfig c(2, 4);
    EXPECT_NEAR(fidelity(make_state(c, parse_state_spec("psi:2:1")), collective_state(c, 2, 1)), 1.0, 1e-15);
    EXPECT_THROW(make_state(HilbertConfig(3, 2), parse_state_spec("upsilon")), std::invalid_argument);
}
