#pragma once

#include <cstddef>
#include <functional>

namespace sigkit {

// Runs fn(chunk_index, begin, end) over every fixed-size chunk of [0, total).
// Chunk boundaries depend only on (total, chunk_size), never on num_jobs, so
// callers that seed a substream per chunk_index get results independent of
// the worker count. fn must not touch shared mutable state without its own
// synchronization.
void for_each_chunk(std::size_t total, std::size_t chunk_size, unsigned num_jobs,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

}  // namespace sigkit
