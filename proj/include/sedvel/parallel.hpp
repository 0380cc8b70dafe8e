#pragma once

#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>

namespace sedvel {

/// Carries exceptions out of OpenMP loops. Keeps the one thrown at the lowest
/// iteration index so the reported error does not depend on scheduling.
class LoopErrors {
 public:
  template <class F>
  void run(std::ptrdiff_t index, F&& f) {
    try {
      f();
    } catch (...) {
      std::lock_guard lock(mutex_);
      if (index < index_) {
        index_ = index;
        error_ = std::current_exception();
      }
    }
  }

  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::ptrdiff_t index_ = std::numeric_limits<std::ptrdiff_t>::max();
  std::exception_ptr error_;
};

}  // namespace sedvel
