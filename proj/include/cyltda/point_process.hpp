#pragma once

#include <cstdint>
#include <vector>

#include "cyltda/geometry.hpp"

namespace cyltda {

/// Finite point set in a rectangular window, with seed provenance.
struct PointPattern {
    std::vector<Point> points;
    Window window;
    std::uint64_t seed = 0;
};

/// Strauss process density: f(x) proportional to beta^n(x) * gamma^t_r(x),
/// t_r = number of point pairs closer than r.
struct StraussParams {
    double beta = 1.0;
    double gamma = 1.0;
    double r = 0.1;
    std::uint64_t steps = 0;
    std::uint64_t burn_in = 0;
};

struct MaternParams {
    double kappa = 1.0;       // parent intensity
    double disk_radius = 0.5; // offspring disk radius
    double mu = 1.0;          // mean offspring count
};

PointPattern sample_poisson(const Window& window, double intensity, std::uint64_t seed);

/// Matern cluster process. Parents live on the window dilated by disk_radius
/// so the retained-offspring intensity is exactly kappa * mu inside.
PointPattern sample_matern(const Window& window, const MaternParams& params, std::uint64_t seed);

/// Birth-death-move Metropolis-Hastings chain (proposal mix 1/3 each) started
/// from a Poisson(beta) draw; returns the state after params.steps iterations.
/// steps = 0 returns the initial Poisson state.
PointPattern sample_strauss(const Window& window, const StraussParams& params, std::uint64_t seed);

/// Chain length heuristic: max(200000, 2000 * |W| * beta) iterations.
std::uint64_t default_strauss_steps(const Window& window, double beta);

double estimate_intensity(const PointPattern& pattern);

void validate_params(const StraussParams& p);
void validate_params(const MaternParams& p);

}  // namespace cyltda
