// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

namespace dmimo {

/// Runs fn(i) for i in [0, n) on up to `workers` threads (0 = all hardware
/// threads). Tasks must write only to their own index's slot; reductions
/// happen afterwards in index order, so results never depend on the worker
/// count or scheduling.
void parallel_for(long n, int workers, const std::function<void(long)>& fn);

/// Worker count actually used for a request (0 = hardware concurrency).
int resolve_workers(int requested);

}  // namespace dmimo
