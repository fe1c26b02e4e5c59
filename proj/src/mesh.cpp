#include "jumpsde/mesh.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "jumpsde/error.hpp"

namespace jumpsde {

std::size_t JumpAdaptedMesh::jump_count() const noexcept {
  return static_cast<std::size_t>(std::count(is_jump.begin(), is_jump.end(), 1));
}

double grid_node(double T, int M, int i) noexcept {
  if (i == M) return T;
  return T * (static_cast<double>(i) / static_cast<double>(M));
}

std::vector<double> sample_jump_times(double lambda, double T,
                                      std::mt19937_64& rng) {
  std::vector<double> times;
  if (!(lambda > 0.0)) return times;
  std::exponential_distribution<double> gap(lambda);
  for (double t = gap(rng); t < T; t += gap(rng)) times.push_back(t);
  return times;
}

JumpAdaptedMesh build_mesh(int M, double T, std::span<const double> jump_times) {
  if (M < 1) throw Error(ErrorKind::Mesh, fmt::format("M must be >= 1, got {}", M));
  if (!(T > 0.0)) throw Error(ErrorKind::Mesh, fmt::format("T must be positive, got {}", T));
  const double tol = kDedupRelTol * T;
  for (std::size_t j = 0; j < jump_times.size(); ++j) {
    const double t = jump_times[j];
    if (!(t > tol) || t > T + tol) {
      throw Error(ErrorKind::Mesh,
                  fmt::format("jump time {} outside (0, T = {}]", t, T));
    }
    if (j > 0 && t < jump_times[j - 1]) {
      throw Error(ErrorKind::Mesh, "jump times must be sorted");
    }
  }

  JumpAdaptedMesh mesh;
  mesh.M = M;
  mesh.base_dt = T / M;
  mesh.nodes.reserve(M + 1 + jump_times.size());
  mesh.is_jump.reserve(M + 1 + jump_times.size());
  std::vector<std::uint8_t> on_grid;
  on_grid.reserve(M + 1 + jump_times.size());

  auto push = [&](double t, bool jump, bool grid) {
    if (!mesh.nodes.empty() && t - mesh.nodes.back() <= tol) {
      mesh.is_jump.back() |= static_cast<std::uint8_t>(jump);
      if (grid && !on_grid.back()) {
        mesh.nodes.back() = t;
        on_grid.back() = 1;
      }
      return;
    }
    mesh.nodes.push_back(t);
    mesh.is_jump.push_back(static_cast<std::uint8_t>(jump));
    on_grid.push_back(static_cast<std::uint8_t>(grid));
  };

  int i = 0;
  std::size_t j = 0;
  while (i <= M || j < jump_times.size()) {
    const double g = i <= M ? grid_node(T, M, i) : HUGE_VAL;
    const double s = j < jump_times.size() ? std::min(jump_times[j], T) : HUGE_VAL;
    if (g <= s) {
      push(g, false, true);
      ++i;
    } else {
      push(s, true, false);
      ++j;
    }
  }
  // A jump folded back past the last grid node would leave a sliver after T.
  if (mesh.nodes.back() != T) {
    throw Error(ErrorKind::Mesh, "mesh does not end at T");
  }
  return mesh;
}

}  // namespace jumpsde
