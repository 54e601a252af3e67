#pragma once

// Glue between Stack evaluation and the batched recursion kernels.

#include <span>

#include "natmodes/kernels.hpp"
#include "natmodes/transfer.hpp"

namespace natmodes::detail {

struct PhaseFactors {
  cplx ep;       // exp(i delta - |Im delta|)
  cplx em;       // exp(-i delta - |Im delta|)
  double decay;  // exp(-|Im delta|)
  double shift;  // |Im delta|
};

PhaseFactors phase_factors(cplx delta);

void fill_batch(const Stack& stack, std::span<const cplx> omegas, kernels::RecursionBatch& batch);

TransferResult batch_result(const kernels::RecursionOutput& out, std::size_t p);

}  // namespace natmodes::detail
