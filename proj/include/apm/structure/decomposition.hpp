#pragma once

#include "apm/engine/apm.hpp"

namespace apm {

/// The direct iteration computed as independent single-vector iterations on
/// each support plus a frozen part off all supports, recombined per step.
/// Throws PreconditionViolated unless the basis is pairwise disjoint.
IterationTrace solve_by_decomposition(const ProblemInstance& instance);

}  // namespace apm
