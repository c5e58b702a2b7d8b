// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <mutex>

namespace cbir::detail {

/// FFTW's planner is process-global and not thread-safe. Every plan
/// creation and destruction in the library holds this lock.
std::mutex& fftw_planner_mutex();

}  // namespace cbir::detail
