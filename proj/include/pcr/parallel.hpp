#pragma once

#include <cstdint>
#include <functional>

namespace pcr {

/// Worker count: PCR_THREADS when set (>=1), else the hardware count.
int thread_count();

/**
 * Runs fn(i) for i in [0, n) across thread_count() workers in fixed
 * contiguous chunks. fn must only touch state owned by index i, so the
 * result is identical to the serial loop.
 */
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

}  // namespace pcr
