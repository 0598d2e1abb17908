// Open-system dynamics of a cavity-coupled two-level atom, comparing a bright
// coherent input with the out-of-phase (dark) one.
//
//   ./demo_dark_state_decay

#include <cstdio>
#include <vector>

#include "brightdark/collective.hpp"
#include "brightdark/dynamics.hpp"
#include "brightdark/states.hpp"

namespace bd = brightdark;

namespace {

void report(const char* label, const bd::TimeSeries& series) {
    const auto& t = series.times();
    const auto& ee = series.channel("sigma_ee");
    const auto& na = series.channel("nA");
    double peak = 0.0;
    for (double v : ee) peak = std::max(peak, v);
    std::printf("%-12s peak sigma_ee %.6e   nA(0) %.6f   nA(%g) %.6f\n", label, peak, na.front(), t.back(), na.back());
}

}  // namespace

int main() {
    const double alpha = 0.7071067811865476;
    const bd::HilbertConfig field(2, 6);
    bd::SystemParams params;
    params.g = 1.0;
    params.gamma = 1.0;
    params.kappa = {0.01};
    const std::vector<double> times = bd::linear_grid(0.0, 10.0, 101);

    bd::LindbladOptions options;
    options.check_convergence = false;

    const bd::StateVector bright = bd::with_atom(bd::coherent(field, {{alpha, alpha}}), 2, 0);
    const bd::StateVector dark = bd::with_atom(bd::coherent(field, {{alpha, -alpha}}), 2, 0);
    report("|a,a>", bd::lindblad_evolve(bright.config(), params, bd::DensityOperator::from_pure(bright), times, options));
    report("|a,-a>", bd::lindblad_evolve(dark.config(), params, bd::DensityOperator::from_pure(dark), times, options));

    // Factorized model with the atom initially excited and no field.
    const bd::TimeSeries semi = bd::semiclassical_evolve(params, 0.0, bd::AtomBloch::excited(), times);
    std::printf("%-12s sigma_ee(10) %.6e (e^-20 = %.6e)\n", "semiclass.", semi.channel("sigma_ee").back(),
                std::exp(-20.0));
    return 0;
}
