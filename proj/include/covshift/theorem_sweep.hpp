#pragma once

// Exhaustive enumeration of partitions and coarsenings on small spaces, random
// (P, A) generators, and the sweep that compares sufficiency against
// inheritance of covariate shift on every enumerated structure.

#include "covshift/finite_space.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace covshift::finite {

/// Every partition of the space (Bell(n) of them), in restricted-growth order.
std::vector<Partition> all_partitions(const FiniteSpace& space);

/// Every partition G with G.coarsens(h), including h itself and the trivial
/// partition.
std::vector<Partition> all_coarsenings(const Partition& h);

Partition random_partition(const FiniteSpace& space, std::mt19937_64& rng);

struct MeasuredEvent {
    FiniteMeasure p;
    Event a;
};

/// Random P and A with 0 < P[A] < 1. Half of the draws give P i.i.d.
/// exponential masses; the other half pick each H-cell posterior from
/// {1/4, 1/2, 3/4} so that coarsenings merging equal-posterior cells are
/// sufficient. Either kind may set some outcome masses to zero.
MeasuredEvent random_measure_and_event(const Partition& h, std::mt19937_64& rng);

struct SweepConfig {
    std::size_t min_size = 2;
    std::size_t max_size = 6;
    std::size_t draws_per_structure = 20;
    std::size_t random_densities = 8;
    std::uint64_t seed = 42;
    double tol = kDefaultTol;
};

struct SweepCase {
    std::size_t n = 0;
    bool sufficient = false;
    bool inherited = false;
    bool coarsening_is_identity = false;
    bool example3 = false;

    bool agree() const noexcept { return sufficient == inherited; }
};

struct SweepReport {
    std::vector<SweepCase> cases;
    std::size_t structures = 0;
    std::size_t disagreements = 0;
    std::size_t sufficient_cases = 0;
};

/// Runs verify_theorem1 over all (H, G) pairs with G coarsening H for every
/// space size in [min_size, max_size], `draws_per_structure` random (P, A) per
/// pair, then appends the three-coordinate independence example.
SweepReport run_theorem_sweep(const SweepConfig& config);

} // namespace covshift::finite
