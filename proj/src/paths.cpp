#include "jumpsde/paths.hpp"

#include <cmath>

#include <fmt/format.h>

#include "jumpsde/error.hpp"

namespace jumpsde {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Index ranges [first, last) of fine intervals covered by each interval of
// `coarse`. Both meshes must come from the same jump times.
std::vector<std::size_t> cover_boundaries(const JumpAdaptedMesh& fine,
                                          const JumpAdaptedMesh& coarse) {
  const double tol = kDedupRelTol * fine.horizon();
  std::vector<std::size_t> at;
  at.reserve(coarse.nodes.size());
  std::size_t f = 0;
  for (double t : coarse.nodes) {
    while (f < fine.nodes.size() && fine.nodes[f] < t - tol) ++f;
    if (f == fine.nodes.size() || std::abs(fine.nodes[f] - t) > tol) {
      throw Error(ErrorKind::Mesh,
                  fmt::format("coarse node {} missing from the fine mesh", t));
    }
    at.push_back(f);
  }
  return at;
}

void require_divides(int M_fine, int M_coarse) {
  if (M_coarse < 1 || M_fine % M_coarse != 0) {
    throw Error(ErrorKind::Mesh, fmt::format("M = {} does not divide M_ref = {}",
                                             M_coarse, M_fine));
  }
}

}  // namespace

std::mt19937_64 path_stream(std::uint64_t global_seed, std::uint64_t path_index,
                            Substream substream) {
  std::uint64_t key = splitmix64(global_seed);
  key = splitmix64(key ^ path_index);
  key = splitmix64(key ^ static_cast<std::uint64_t>(substream));
  return std::mt19937_64(key);
}

PathBundle generate_bundle(const ModelParams& params, int M_ref,
                           std::uint64_t global_seed, std::uint64_t path_index) {
  PathBundle bundle;
  bundle.global_seed = global_seed;
  bundle.path_index = path_index;

  auto jumps = path_stream(global_seed, path_index, Substream::Jumps);
  bundle.jump_times = sample_jump_times(params.lambda, params.T, jumps);
  bundle.fine_mesh = build_mesh(M_ref, params.T, bundle.jump_times);

  auto brownian = path_stream(global_seed, path_index, Substream::Brownian);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t n = bundle.fine_mesh.intervals();
  bundle.dW_fine.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    bundle.dW_fine[k] = std::sqrt(bundle.fine_mesh.dt(k)) * normal(brownian);
  }
  return bundle;
}

CoarsePath coarsen_increments(const PathBundle& bundle, int M_coarse) {
  require_divides(bundle.fine_mesh.M, M_coarse);
  CoarsePath out;
  if (M_coarse == bundle.fine_mesh.M) {
    out.mesh = bundle.fine_mesh;
    out.dW = bundle.dW_fine;
    return out;
  }
  out.mesh = build_mesh(M_coarse, bundle.fine_mesh.horizon(), bundle.jump_times);
  const auto at = cover_boundaries(bundle.fine_mesh, out.mesh);
  out.dW.resize(out.mesh.intervals());
  for (std::size_t k = 0; k < out.dW.size(); ++k) {
    double sum = 0.0;
    for (std::size_t f = at[k]; f < at[k + 1]; ++f) sum += bundle.dW_fine[f];
    out.dW[k] = sum;
  }
  return out;
}

RegularPath regular_increments(const PathBundle& bundle, int M) {
  require_divides(bundle.fine_mesh.M, M);
  const double T = bundle.fine_mesh.horizon();
  const JumpAdaptedMesh grid = build_mesh(M, T, {});
  const auto at = cover_boundaries(bundle.fine_mesh, grid);

  RegularPath out;
  out.M = M;
  out.dt = T / M;
  out.dW.assign(M, 0.0);
  out.dN.assign(M, 0);
  for (int k = 0; k < M; ++k) {
    double sum = 0.0;
    for (std::size_t f = at[k]; f < at[k + 1]; ++f) {
      sum += bundle.dW_fine[f];
      // A jump folded onto a fine node counts for the interval it closes.
      out.dN[k] += bundle.fine_mesh.is_jump[f + 1];
    }
    out.dW[k] = sum;
  }
  return out;
}

}  // namespace jumpsde
