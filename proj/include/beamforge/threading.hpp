#ifndef BEAMFORGE_THREADING_HPP
#define BEAMFORGE_THREADING_HPP

#include <cstddef>
#include <functional>

namespace beamforge {

// 0 or negative -> hardware concurrency.
int resolve_threads(int requested);

// Runs fn(i) for every i in [0, n). Work items must write to disjoint state
// so results are identical for any thread count.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

// Runs fn(begin, end) over contiguous blocks of at most block elements.
void parallel_for_blocked(
    std::size_t n, std::size_t block, int threads,
    const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace beamforge

#endif
