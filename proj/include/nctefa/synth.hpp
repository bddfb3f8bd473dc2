#pragma once

#include <cstdint>
#include <span>

#include "nctefa/graph.hpp"
#include "nctefa/rng.hpp"

namespace nctefa {

/// Circulant graph: node i adjacent to i +- d (mod n) for each offset d.
Graph circulant_graph(int n, std::span<const int> offsets);

/// Uniform random simple d-regular graph via the pairing model: random
/// perfect matching on d stubs per node, rejected and redrawn whole whenever
/// it produces a self-loop or parallel edge. Throws NumericError when the
/// attempt budget is exhausted.
Graph random_regular_graph(int n, int degree, Rng& rng, int max_attempts = 100000);

/// The "regular-pair" task: class 0 = circulant C_n(1,2), class 1 = uniform
/// random 4-regular graph, n drawn uniformly from [n_min, n_max]. Both
/// classes are 4-regular, so degree encodings carry no class signal.
/// Entries come back sorted by id.
GraphDataset synth_regular_pair(int count, std::uint64_t seed, int n_min = 12, int n_max = 24);

} // namespace nctefa
