#pragma once

// Deterministic task executor for per-source sampling. Every task draws
// from the stream (base_seed, source_id), so results are bitwise
// identical for any worker count or scheduling order.

#include <cstdint>
#include <functional>
#include <vector>

#include "hiermc/model.hpp"

namespace hiermc {

struct SamplerTask {
  int source_id = 0;
  std::function<SourceDraws(RandomStream&)> run;
};

struct TaskPlan {
  std::vector<SamplerTask> tasks;  // one per source
  int workers = 0;                 // 0 = hardware parallelism, capped at J
  std::uint64_t base_seed = 0;
};

struct ParallelResult {
  std::vector<SourceDraws> draws;    // ordered by source_id
  std::vector<double> task_seconds;  // same order
  double wall_seconds = 0.0;
};

/// Runs the plan. Any task failure aborts the batch and is rethrown as a
/// TaskError carrying the failing source id.
ParallelResult run_parallel(const TaskPlan& plan);

}  // namespace hiermc
