#pragma once

#include <cstddef>
#include <functional>

namespace qprob {

/// Worker cap: min(QPROB_THREADS, hardware concurrency), at least 1.
std::size_t thread_cap();

/// Run fn(i) for i in [0, count) across up to thread_cap() threads in
/// static blocks. fn must be safe to call concurrently for distinct i;
/// exceptions propagate from the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace qprob
