#pragma once

#include <cstddef>
#include <functional>

namespace stratres {

/// Runs body(i) for i in [0, count). Implementations may run items
/// concurrently; callers write results into per-index slots only.
using Executor = std::function<void(std::size_t count, const std::function<void(std::size_t)>& body)>;

void run_serial(std::size_t count, const std::function<void(std::size_t)>& body);

/// Static round-robin partition over `jobs` threads; jobs <= 1 is serial.
/// The first exception thrown by any item is rethrown after all threads join.
Executor make_thread_executor(unsigned jobs);

}  // namespace stratres
