#pragma once

#include <functional>

namespace quadcurl {

/// Process-wide worker count for element loops (default: hardware
/// concurrency).  Parallel loops write per-index slots and reduce serially,
/// so results are byte-identical for any thread count.
void set_num_threads(int n);
int get_num_threads();

/// Run fn(i) for i in [begin, end), split into contiguous blocks across the
/// configured number of threads.  fn must only touch state owned by index i.
void parallel_for(int begin, int end, const std::function<void(int)>& fn);

}  // namespace quadcurl
