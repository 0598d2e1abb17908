// Fringes of a Mach-Zehnder interferometer for a few two-mode inputs.
//
//   ./demo_interferometer_fringes

#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "brightdark/collective.hpp"
#include "brightdark/interferometer.hpp"
#include "brightdark/states.hpp"

namespace bd = brightdark;

int main() {
    const std::vector<double> grid = bd::linear_grid(0.0, 2.0 * std::numbers::pi, 201);
    const bd::HilbertConfig config(2, 4);

    struct Input {
        std::string label;
        bd::StateVector state;
    };
    const std::vector<Input> inputs{
        {"upsilon", bd::upsilon(config)},
        {"psi^1_0 (dark)", bd::collective_state(config, 1, 0)},
        {"psi^1_1 (bright)", bd::collective_state(config, 1, 1)},
        {"psi^2_1", bd::collective_state(config, 2, 1)},
    };

    std::printf("%-18s %10s %10s %12s %12s\n", "input", "vis A", "vis B", "min nA", "max nA");
    for (const auto& in : inputs) {
        const bd::FringeScan scan = bd::fringe_scan(in.state, grid);
        double lo = scan.n_a.front(), hi = scan.n_a.front();
        for (double v : scan.n_a) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        std::printf("%-18s %10.6f %10.6f %12.6f %12.6f\n", in.label.c_str(), scan.visibility_a, scan.visibility_b, lo,
                    hi);
    }

    // Out-of-phase classical fields against the same grid.
    const bd::FringeScan classical = bd::fringe_scan(bd::ClassicalField::from_phase(std::numbers::pi, 0.5), grid);
    std::printf("%-18s %10.6f %10.6f\n", "classical theta=pi", classical.visibility_a, classical.visibility_b);
    return 0;
}
