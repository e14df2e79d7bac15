#pragma once

#include <cstddef>
#include <functional>

namespace mabhet {

/// Worker count: $MABHET_THREADS if set and positive, else the hardware concurrency.
unsigned ThreadCount();

/// Runs body(i) for i in [0, n) on ThreadCount() threads. Work is handed out
/// in contiguous chunks; callers write results by index, so the outcome does
/// not depend on scheduling. The first exception thrown by a body is rethrown.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace mabhet
