#include "apm/engine/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace apm {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_trace_csv(std::ostream& out, const IterationTrace& trace) {
  const std::size_t nv = trace.basis ? trace.basis->size() : 0;
  out << "j,dist_to_A,dist_to_B,step_delta,norm_b";
  for (std::size_t i = 1; i <= nv; ++i) out << ",q_coeff_" << i;
  out << '\n';
  for (const auto& s : trace.steps) {
    out << s.j << ',' << format_double(s.dist_to_A) << ',' << format_double(s.dist_to_B) << ','
        << format_double(s.step_delta) << ',' << format_double(s.fejer_dist_to_origin);
    for (double c : s.q_coefficients) out << ',' << format_double(c);
    out << '\n';
  }
}

void write_plot_csv(std::ostream& out, const IterationTrace& trace) {
  out << "j,log10_residual\n";
  for (const auto& s : trace.steps) {
    out << s.j << ',' << format_double(std::log10(std::max(s.residual(), 1e-300))) << '\n';
  }
}

namespace {

void write_array(std::ostream& out, const SeqVec& v) {
  out << '[';
  const auto e = v.entries();
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (k) out << ',';
    out << format_double(e[k]);
  }
  out << ']';
}

}  // namespace

void write_snapshots_json(std::ostream& out, const IterationTrace& trace) {
  out << "{\"snapshot_stride\":" << trace.snapshot_stride << ",\"snapshots\":[";
  for (std::size_t i = 0; i < trace.snapshots.size(); ++i) {
    const auto& s = trace.snapshots[i];
    if (i) out << ',';
    out << "{\"j\":" << s.j << ",\"a\":";
    if (s.a) {
      write_array(out, *s.a);
    } else {
      out << "null";
    }
    out << ",\"b\":";
    write_array(out, s.b);
    out << '}';
  }
  out << "]}\n";
}

}  // namespace apm
