#pragma once

#include <cstdint>
#include <exception>
#include <mutex>

namespace rpmt {

// Execution policy for Monte Carlo kernels. Each kernel writes one slot per
// draw index and reduces in index order, so Serial and OpenMP yield
// bit-identical results; Serial is the reference path kept for testing.
enum class Exec { Serial, OpenMP };

template <class Fn>
void parallel_for(std::int64_t count, Exec exec, Fn&& body) {
  if (exec == Exec::OpenMP) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (std::int64_t i = 0; i < count; ++i) body(i);
  } else {
    for (std::int64_t i = 0; i < count; ++i) body(i);
  }
}

// OpenMP loops cannot propagate exceptions; bodies run under capture() and
// the lowest-index failure is rethrown after the loop joins, keeping error
// reporting independent of thread scheduling.
class FirstError {
 public:
  template <class Fn>
  void capture(std::int64_t index, Fn&& fn) noexcept {
    try {
      fn();
    } catch (...) {
      record(index, std::current_exception());
    }
  }

  void rethrow_if_any() {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  void record(std::int64_t index, std::exception_ptr err) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (index_ < 0 || index < index_) {
      index_ = index;
      error_ = err;
    }
  }

  std::mutex mutex_;
  std::int64_t index_ = -1;
  std::exception_ptr error_;
};

}  // namespace rpmt
