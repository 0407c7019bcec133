#include "ktinv/sampling.hpp"

#include <cmath>
#include <numbers>

namespace ktinv {

double halton(std::uint64_t index, unsigned base) {
    double f = 1.0;
    double r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

void validate_config(const SampleConfig& cfg) {
    if (cfg.count < 12) fail(ErrorKind::DomainError, "sample count must be at least 12");
    if (!(cfg.margin > 0.0)) fail(ErrorKind::DomainError, "margin must be positive");
    if (!(cfg.r_min > 0.0) || !(cfg.r_max > cfg.r_min) || !std::isfinite(cfg.r_max))
        fail(ErrorKind::DomainError, "annulus requires 0 < r_min < r_max");
}

SampleSet make_samples(const PotentialSpec& spec, const SampleConfig& cfg, unsigned base_x, unsigned base_y) {
    validate_config(cfg);
    SampleSet s{{}, cfg.r_min, cfg.r_max, cfg.margin, cfg.seed, cfg.count};
    s.points.reserve(cfg.count);

    const double a2 = cfg.r_min * cfg.r_min;
    const double b2 = cfg.r_max * cfg.r_max;
    const std::uint64_t budget = 1000ULL * static_cast<std::uint64_t>(cfg.count);
    for (std::uint64_t i = 0; i < budget && static_cast<int>(s.points.size()) < cfg.count; ++i) {
        const std::uint64_t idx = cfg.seed + 1 + i;
        const double r = std::sqrt(a2 + halton(idx, base_x) * (b2 - a2));
        const double th = 2.0 * std::numbers::pi * halton(idx, base_y) - std::numbers::pi;
        const Point2 p{r * std::cos(th), r * std::sin(th)};
        if (!respects_margin(spec, p, cfg.margin)) continue;
        try {
            eval_potential(spec, p);
        } catch (const KtError& e) {
            if (e.kind() != ErrorKind::SingularPoint) throw;
            continue;
        }
        s.points.push_back(p);
    }
    if (static_cast<int>(s.points.size()) < cfg.count)
        fail(ErrorKind::SamplingExhausted, "found only " + std::to_string(s.points.size()) + " of " +
                                               std::to_string(cfg.count) + " valid points for " + spec.descriptor());
    return s;
}

}  // namespace ktinv
