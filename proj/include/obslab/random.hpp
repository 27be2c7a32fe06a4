#pragma once

#include <cstdint>
#include <random>

#include "obslab/geometry.hpp"
#include "obslab/remez.hpp"
#include "obslab/semigroup.hpp"

namespace obslab {

using Rng = std::mt19937_64;

// Independent seed for item `index` of a run with master seed `master` (splitmix64).
std::uint64_t case_seed(std::uint64_t master, std::uint64_t index);

// Degree uniform in [0, max_degree], Gaussian coefficients with a random overall scale.
TrigPoly random_trig_poly(Rng& rng, int max_degree);

// Union of 1..max_intervals random intervals of (-pi, pi), redrawn until its
// measure reaches min_measure.
AngleMask random_angle_set(Rng& rng, int cells, int max_intervals, double min_measure);

// Random lambda, b, S with lambda b S <= max_window, phase in [-pi/2, pi/2] and
// F a union of up to 5 intervals of the window (2048 cells).
SineBoundCase random_sine_case(Rng& rng, double max_window);

// Gaussian coefficients normalized to unit norm.
SpectralState random_state(Rng& rng, int n_modes);

// Union of random space-time boxes, grown until it covers at least
// min_fraction of the cylinder.
SpaceTimeSet random_space_time_set(Rng& rng, const SpatialGrid& grid, int time_cells,
                                   double horizon, double min_fraction);

}  // namespace obslab
