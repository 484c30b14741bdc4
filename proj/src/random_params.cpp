#include "ellim/random_params.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ellim {

ParamPoint random_params(int m, std::mt19937_64& rng, const DrawOptions& opt) {
    if (m < 0) throw std::invalid_argument("random_params: m must be non-negative");
    if (!(0.0 < opt.r_min && opt.r_min <= 1.0 && 1.0 <= opt.r_max)) throw std::invalid_argument("random_params: bad annulus");
    const std::size_t n = static_cast<std::size_t>(2 * m + 6);
    const double scale = std::pow(std::abs(opt.q), double(m + 1) / double(n));
    std::uniform_real_distribution<double> mod(opt.r_min, opt.r_max), arg(0.0, 2.0 * std::numbers::pi);
    for (;;) {
        std::vector<cplx> first(n - 1);
        for (auto& x : first) {
            const double r = mod(rng);
            x = std::polar(r * scale, arg(rng));
        }
        ParamPoint u = make_param_point(m, first, opt.q);
        const double last = std::abs(u.u.back()) / scale;
        const bool inside = std::all_of(u.u.begin(), u.u.end(), [&](cplx x) {
            const double r = std::abs(x) / scale;
            return opt.r_min <= r && r <= opt.r_max;
        });
        if (inside && std::isfinite(last)) return u;
    }
}

std::uint64_t case_seed(std::uint64_t base, std::uint64_t k) {
    // splitmix64 step
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (k + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace ellim
