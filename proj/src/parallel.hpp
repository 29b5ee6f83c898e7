#pragma once

#include <exception>

namespace dshell {

// Holds the first exception thrown inside an OpenMP loop body so it can be rethrown on
// the calling thread after the loop.
class ErrorSlot {
public:
  template <class F> void run(F &&f) {
    try {
      f();
    } catch (...) {
#pragma omp critical(dshell_error_slot)
      if (!error_)
        error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_)
      std::rethrow_exception(error_);
  }

private:
  std::exception_ptr error_;
};

} // namespace dshell
