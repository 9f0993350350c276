#pragma once

#include <cstddef>
#include <functional>

namespace toepspec {

/// Environment variable read by thread_count().
inline constexpr const char* kThreadsEnv = "TOEPSPEC_THREADS";

/// TOEPSPEC_THREADS if set to a positive integer, else the number of logical cores.
[[nodiscard]] std::size_t thread_count();

/// Runs body(i) for i in [0, count) on up to thread_count() workers. Results
/// must go to slot i of a caller-owned buffer, so output never depends on
/// scheduling. The first exception thrown by a task is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace toepspec
