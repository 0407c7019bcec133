#pragma once

#include <cstdint>
#include <vector>

#include "ktinv/kt_core.hpp"
#include "ktinv/potential.hpp"

namespace ktinv {

/// Radical inverse of `index` in `base` (van der Corput); index 0 maps to 0.
double halton(std::uint64_t index, unsigned base);

struct SampleConfig {
    int count = 240;
    std::uint64_t seed = 42;
    double r_min = 0.5;
    double r_max = 2.5;
    double margin = 0.1;
};

struct SampleSet {
    std::vector<Point2> points;
    double r_min = 0.5;
    double r_max = 2.5;
    double margin = 0.1;
    std::uint64_t seed = 42;
    int count = 0;
};

/// Throws DomainError for count < 12, non-positive margin or a bad annulus.
void validate_config(const SampleConfig& cfg);

/// Area-uniform Halton points in the annulus that keep the margin from the
/// singular set of `spec` and evaluate to a finite jet. The Halton index
/// starts at seed + 1; `base_x`/`base_y` select the coordinate sequences
/// (2, 3 for assembly and 5, 7 for validation). Throws SamplingExhausted.
SampleSet make_samples(const PotentialSpec& spec, const SampleConfig& cfg, unsigned base_x = 2, unsigned base_y = 3);

}  // namespace ktinv
