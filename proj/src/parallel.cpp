#include "stratres/parallel.hpp"

#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace stratres {

void run_serial(std::size_t count, const std::function<void(std::size_t)>& body) {
  for (std::size_t i = 0; i < count; ++i) body(i);
}

Executor make_thread_executor(unsigned jobs) {
  if (jobs <= 1) return run_serial;
  return [jobs](std::size_t count, const std::function<void(std::size_t)>& body) {
    std::exception_ptr first;
    std::mutex mu;
    {
      std::vector<std::jthread> workers;
      for (unsigned w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w] {
          for (std::size_t i = w; i < count; i += jobs) {
            try {
              body(i);
            } catch (...) {
              std::lock_guard lock(mu);
              if (!first) first = std::current_exception();
            }
          }
        });
      }
    }
    if (first) std::rethrow_exception(first);
  };
}

}  // namespace stratres
