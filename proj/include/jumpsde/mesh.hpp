#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace jumpsde {

// Time grid formed by merging the uniform grid {i T / M} with the jump
// times of one Poisson path. Immutable once built.
struct JumpAdaptedMesh {
  std::vector<double> nodes;        // nodes.front() == 0, nodes.back() == T
  std::vector<std::uint8_t> is_jump;  // one flag per node
  double base_dt = 0.0;             // T / M
  int M = 0;

  std::size_t intervals() const noexcept { return nodes.size() - 1; }
  double dt(std::size_t k) const { return nodes[k + 1] - nodes[k]; }
  double horizon() const noexcept { return nodes.back(); }
  std::size_t jump_count() const noexcept;

  friend bool operator==(const JumpAdaptedMesh&, const JumpAdaptedMesh&) = default;
};

// Nodes closer than this fraction of T are merged.
inline constexpr double kDedupRelTol = 1e-12;

// i-th node of the uniform grid with M steps on [0, T]. Computed as
// T * (i / M) so that dyadic refinements reproduce coarse nodes exactly.
double grid_node(double T, int M, int i) noexcept;

// Jump epochs on (0, T) of a Poisson process with the given intensity:
// partial sums of Exponential(lambda) gaps, stopped at T.
std::vector<double> sample_jump_times(double lambda, double T, std::mt19937_64& rng);

// Merges the uniform M-grid with sorted jump times in (0, T]. A jump within
// kDedupRelTol * T of a grid node (or of a previous jump) is folded into
// that node and flags it. Throws Error(Mesh) for M < 1, T <= 0, unsorted
// input or a jump outside (0, T].
JumpAdaptedMesh build_mesh(int M, double T, std::span<const double> jump_times);

}  // namespace jumpsde
