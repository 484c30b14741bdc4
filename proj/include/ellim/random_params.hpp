#pragma once

#include "ellim/rootsys.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace ellim {

/// Witness draws: moduli uniform in [r_min, r_max] * q^{(m+1)/n}, arguments
/// uniform, the last coordinate solved for balancing.  r_min <= 1 <= r_max.
struct DrawOptions {
    cplx q = 0.3;
    double r_min = 0.8;
    double r_max = 1.25;
    int max_attempts = 100;
};

/// Raised by an identity when some side cannot be evaluated at the given
/// parameters (contour pinched, series divergent, quadrature failure).
struct InadmissibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DrawExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One draw; the balancing coordinate is also kept inside the scaled annulus.
ParamPoint random_params(int m, std::mt19937_64& rng, const DrawOptions& opt = {});

/// Redraws until f(u) returns without InadmissibleError.  attempts receives
/// the number of draws used.
template <class F>
auto draw_admissible(int m, std::uint64_t seed, const DrawOptions& opt, F&& f, int* attempts = nullptr) {
    std::mt19937_64 rng(seed);
    for (int k = 1; k <= opt.max_attempts; ++k) {
        const ParamPoint u = random_params(m, rng, opt);
        try {
            auto out = f(u);
            if (attempts) *attempts = k;
            return out;
        } catch (const InadmissibleError&) {
        }
    }
    throw DrawExhausted("no admissible parameters after " + std::to_string(opt.max_attempts) + " draws (seed " +
                        std::to_string(seed) + ")");
}

/// Seed of case k in a suite, so that cases can run in any order.
std::uint64_t case_seed(std::uint64_t base, std::uint64_t k);

}  // namespace ellim
