#pragma once

#include <cstddef>
#include <functional>

namespace bhd {

/// Worker count used when a call passes 0. Defaults to hardware concurrency.
unsigned default_workers();
void set_default_workers(unsigned workers);

/// Run body(i) for i in [0, n). Results must be written to per-index slots so
/// the outcome does not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned workers = 0);

}  // namespace bhd
