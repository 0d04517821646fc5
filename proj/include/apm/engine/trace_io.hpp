#pragma once

#include <ostream>
#include <string>

#include "apm/engine/apm.hpp"

namespace apm {

/// j,dist_to_A,dist_to_B,step_delta,norm_b,q_coeff_1..q_coeff_N at 17 digits.
void write_trace_csv(std::ostream& out, const IterationTrace& trace);
/// j,log10_residual with the residual clamped below at 1e-300.
void write_plot_csv(std::ostream& out, const IterationTrace& trace);
/// {"snapshot_stride": K, "snapshots": [{"j":..,"a":[..]|null,"b":[..]}, ..]}
void write_snapshots_json(std::ostream& out, const IterationTrace& trace);

std::string format_double(double x);

}  // namespace apm
