#pragma once

// File formats written by the CLI. Every floating-point value is printed
// with 17 significant digits so reruns can be compared byte for byte.

#include <ostream>
#include <string>
#include <vector>

#include "jumpsde/harness.hpp"
#include "jumpsde/mesh.hpp"
#include "jumpsde/solver.hpp"

namespace jumpsde {

// scheme,dt,error_l1,stderr,error_l2,n_paths
void write_convergence_csv(std::ostream& os,
                           const std::vector<ConvergenceReport>& reports);

// Fitted slope, intercept, r2 and seed per scheme plus the resolved config.
std::string convergence_json(const std::vector<ConvergenceReport>& reports,
                             const std::string& config_echo);

// log2_dt,log2_error,log2_reference; the reference is a slope-1 line through
// the coarsest ladder point.
void write_plot_data(std::ostream& os, const ConvergenceReport& report);

// param_set,h_family,dt,n_values,n_nonpositive,percent
void write_positivity_csv(std::ostream& os, const PositivityReport& report);

// p,sup_mean,sup_stderr,terminal_mean,terminal_stderr,M,n_paths
void write_moments_csv(std::ostream& os, const MomentTable& table);

// t,is_jump,z_pre,z_post,x
void write_trajectory_csv(std::ostream& os, const TrajectoryZ& trajectory,
                          double rho);

// t,is_jump
void write_mesh_csv(std::ostream& os, const JumpAdaptedMesh& mesh);

// Companion document for the CSV reports other than convergence: a summary
// object plus the resolved config.
std::string report_json(const std::string& kind, const std::string& summary_json,
                        const std::string& config_echo);

}  // namespace jumpsde
