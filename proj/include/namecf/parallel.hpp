#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace namecf {

/// Explicit request wins, then NAMECF_THREADS, then hardware concurrency.
std::size_t resolve_threads(std::optional<std::size_t> requested = std::nullopt);

/// Calls fn(i) for i in [0, count) on up to `threads` workers using static
/// contiguous chunks. The first exception thrown is rethrown.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace namecf
