#pragma once

#include <cstddef>
#include <functional>

namespace aptfs {

/// Worker budget for parallel sections. 0 means "use hardware concurrency".
int effective_threads(int requested);

/// Runs fn(i) for i in [begin, end) on up to n_threads workers.
///
/// Indices are handed out in fixed-size blocks; any reduction a caller needs
/// must be written per index (or per block) and combined in index order so the
/// result does not depend on the number of workers or their scheduling.
void parallel_for(std::size_t begin, std::size_t end, int n_threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace aptfs
