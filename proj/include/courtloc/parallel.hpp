#pragma once

#include <cstdint>

namespace courtloc::par {

// Thread budget for the OpenMP kernels. 1 selects the serial reference
// implementations; anything larger (the default is the hardware thread count)
// selects the parallel ones. Every kernel pair is bitwise-equivalent: parallel
// variants keep the per-element accumulation order of the serial reference.
int max_threads();
void set_max_threads(int n);
bool parallel_enabled();

}  // namespace courtloc::par
