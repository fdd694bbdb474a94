#pragma once

#include <cstddef>
#include <functional>

namespace sievebands {

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// handled exactly once; callers write into pre-sized slots, so results do
/// not depend on the thread count. The first exception thrown is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace sievebands
