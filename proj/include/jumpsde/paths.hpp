#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "jumpsde/mesh.hpp"
#include "jumpsde/model.hpp"

namespace jumpsde {

// Independent substreams of one path's randomness.
enum class Substream : std::uint64_t { Jumps = 0, Brownian = 1 };

// Counter-based derivation: the generator depends only on its arguments, so
// a path can be regenerated in any order, on any thread.
std::mt19937_64 path_stream(std::uint64_t global_seed, std::uint64_t path_index,
                            Substream substream);

// One Brownian/Poisson sample path resolved on the finest mesh of a study.
struct PathBundle {
  std::uint64_t global_seed = 0;
  std::uint64_t path_index = 0;
  std::vector<double> jump_times;
  JumpAdaptedMesh fine_mesh;
  std::vector<double> dW_fine;  // dW_fine[k] ~ N(0, fine_mesh.dt(k))
};

PathBundle generate_bundle(const ModelParams& params, int M_ref,
                           std::uint64_t global_seed, std::uint64_t path_index);

// Jump-adapted mesh at a coarser resolution plus the Brownian increments of
// the same path over its intervals.
struct CoarsePath {
  JumpAdaptedMesh mesh;
  std::vector<double> dW;
};

// Requires M_coarse to divide the bundle's M_ref; increments are summed
// left to right over the fine intervals each coarse interval covers.
// Throws Error(Mesh) otherwise, or when a coarse node has no fine
// counterpart within the dedup tolerance.
CoarsePath coarsen_increments(const PathBundle& bundle, int M_coarse);

// The same path seen by a regular-grid scheme: uniform steps, Brownian
// increments per step, and the number of jumps in each (t_k, t_{k+1}].
struct RegularPath {
  int M = 0;
  double dt = 0.0;
  std::vector<double> dW;
  std::vector<int> dN;
};

RegularPath regular_increments(const PathBundle& bundle, int M);

}  // namespace jumpsde
