#pragma once

#include <random>

#include "brightdark/fock.hpp"

namespace support {

/// Normalized state with independent complex Gaussian amplitudes.
inline brightdark::StateVector random_state(const brightdark::HilbertConfig& config, std::mt19937& rng) {
    std::normal_distribution<double> normal;
    brightdark::CVector v(static_cast<Eigen::Index>(config.dimension()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = brightdark::Complex(normal(rng), normal(rng));
    return brightdark::StateVector(config, v / v.norm());
}

/// Random state restricted to total photon number <= max_total (no atom excitation).
inline brightdark::StateVector random_low_photon_state(const brightdark::HilbertConfig& config, int max_total,
                                                       std::mt19937& rng) {
    std::normal_distribution<double> normal;
    brightdark::CVector v = brightdark::CVector::Zero(static_cast<Eigen::Index>(config.dimension()));
    for (std::size_t i = 0; i < config.dimension(); ++i)
        if (config.total_photons(i) <= max_total)
            v(static_cast<Eigen::Index>(i)) = brightdark::Complex(normal(rng), normal(rng));
    return brightdark::StateVector(config, v / v.norm());
}

}  // namespace support
