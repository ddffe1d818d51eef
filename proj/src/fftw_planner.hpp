#pragma once

#include <mutex>

namespace monopole {

// fftw planning is not thread-safe; every planner call takes this lock.
std::mutex& fftw_planner_mutex();

}  // namespace monopole
