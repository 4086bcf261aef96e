// SPDX-License-Identifier: Apache-2.0

#ifndef MISO_EXEC_HPP
#define MISO_EXEC_HPP

#ifdef _OPENMP
#  include <omp.h>
#endif

#include <stdexcept>
#include <string>

namespace miso {

/// Library-wide error type. Every validation failure throws this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Execution policy for the data-parallel kernels.
///
/// threads == 1 selects the serial reference path. threads == 0 uses the
/// OpenMP default. Results never depend on the choice: every kernel reduces
/// integer counts or per-index values only.
struct Exec {
  int threads = 0;

  bool serial() const noexcept { return resolved() == 1; }

  int resolved() const noexcept {
#ifdef _OPENMP
    return threads > 0 ? threads : omp_get_max_threads();
#else
    return 1;
#endif
  }

  static Exec serial_reference() noexcept { return Exec{1}; }
};

}  // namespace miso

#endif  // MISO_EXEC_HPP
