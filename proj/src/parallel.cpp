#include "hiermc/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <set>
#include <string>
#include <thread>

namespace hiermc {

namespace {
using Clock = std::chrono::steady_clock;
}

ParallelResult run_parallel(const TaskPlan& plan) {
  const auto start = Clock::now();
  ParallelResult out;
  const int n = static_cast<int>(plan.tasks.size());
  if (n == 0) {
    out.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return out;
  }

  std::set<int> ids;
  for (const auto& t : plan.tasks) {
    if (!t.run) throw InputError("run_parallel: task without a sampler");
    if (!ids.insert(t.source_id).second) {
      throw InputError("run_parallel: duplicate task for source " +
                       std::to_string(t.source_id));
    }
  }

  // Results are scheduling-independent by construction, so the thread
  // count is a pure throughput knob: never spawn more threads than the
  // hardware can run or than there are tasks.
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  int workers = plan.workers > 0 ? std::min(plan.workers, hw) : hw;
  workers = std::min(workers, n);

  std::vector<SourceDraws> results(n);
  std::vector<double> seconds(n, 0.0);
  std::vector<std::exception_ptr> errors(n);

  auto run_task = [&](int i) {
    const auto& task = plan.tasks[i];
    const auto t0 = Clock::now();
    try {
      RandomStream rng(plan.base_seed,
                       static_cast<std::uint64_t>(task.source_id));
      results[i] = task.run(rng);
    } catch (...) {
      errors[i] = std::current_exception();
    }
    seconds[i] = std::chrono::duration<double>(Clock::now() - t0).count();
  };

  if (workers == 1) {
    for (int i = 0; i < n; ++i) run_task(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const int i = next.fetch_add(1);
          if (i >= n) return;
          run_task(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  for (int i = 0; i < n; ++i) {
    if (errors[i]) {
      try {
        std::rethrow_exception(errors[i]);
      } catch (const std::exception& e) {
        throw TaskError(plan.tasks[i].source_id,
                        "task for source " +
                            std::to_string(plan.tasks[i].source_id) +
                            " failed: " + e.what());
      }
    }
  }

  // Merge by source id regardless of the order tasks were listed in.
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return plan.tasks[a].source_id < plan.tasks[b].source_id;
  });
  out.draws.reserve(n);
  out.task_seconds.reserve(n);
  for (int i : order) {
    out.draws.push_back(std::move(results[i]));
    out.task_seconds.push_back(seconds[i]);
  }
  out.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

}  // namespace hiermc
