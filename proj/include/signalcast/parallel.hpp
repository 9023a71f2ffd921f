#pragma once

#include <cstddef>
#include <functional>

namespace signalcast {

/// Runs fn(0..n-1) on up to `workers` threads. Work is claimed dynamically,
/// so callers must write results into per-index slots. If any call throws,
/// the exception from the lowest failing index is rethrown after all
/// threads finish.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn);

}  // namespace signalcast
