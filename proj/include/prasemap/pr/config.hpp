#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "prasemap/errors.hpp"

namespace prase {

struct UncertainBand {
    double low = 0.1;
    double high = 0.6;
    bool contains(double p) const noexcept { return p > low && p < high; }
};

struct PRConfig {
    double alpha = 0.5;  // weight of the reasoning estimate in the embedding blend
    std::size_t max_self_iterations = 10;
    double convergence_epsilon = 1e-3;
    double theta_lexical = 0.9;  // probability assigned to label-matched entity seeds
    double theta_output = 0.1;   // export threshold
    UncertainBand uncertain_band{};
    std::uint64_t rng_seed = 42;

    void validate() const {
        auto fail = [](const std::string& what) { throw InvalidConfig("pr config: " + what); };
        if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha must lie in (0, 1)");
        if (max_self_iterations == 0) fail("max_self_iterations must be positive");
        if (!(convergence_epsilon > 0.0)) fail("convergence_epsilon must be positive");
        if (!(theta_lexical > 0.0 && theta_lexical <= 1.0)) fail("theta_lexical must lie in (0, 1]");
        if (!(theta_output > 0.0 && theta_output < 1.0)) fail("theta_output must lie in (0, 1)");
        if (!(uncertain_band.low < uncertain_band.high)) fail("uncertain_band requires low < high");
        if (uncertain_band.low < 0.0 || uncertain_band.high > 1.0) fail("uncertain_band must lie within [0, 1]");
    }
};

}  // namespace prase
