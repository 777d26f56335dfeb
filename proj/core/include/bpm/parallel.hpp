#pragma once

#include <cstddef>
#include <functional>

namespace bpm {

/// Runs fn(i) for i in [0, count) across hardware threads with a static
/// block partition. Each index must write only its own output slot; results
/// are then identical to the sequential order regardless of thread count.
/// The first exception thrown by any worker is rethrown on the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

/// Thread count parallel_for will use (hardware concurrency, overridable
/// through the BPM_THREADS environment variable; 1 disables threading).
[[nodiscard]] unsigned parallel_thread_count();

}  // namespace bpm
