#include <doctest.h>

#include <thread>

#include "hiermc/independent.hpp"
#include "hiermc/model.hpp"
#include "hiermc/parallel.hpp"

using namespace hiermc;

namespace {

TaskPlan stage_one_plan(const HierarchicalDataset& ds, int workers,
                        std::uint64_t seed) {
  TaskPlan plan;
  plan.workers = workers;
  plan.base_seed = seed;
  for (const auto& src : ds.sources) {
    plan.tasks.push_back({src.source_id, [&src](RandomStream& rng) {
                            return indep_normal(src, 0.0, 1.0, 200, rng);
                          }});
  }
  return plan;
}

}  // namespace

TEST_CASE("results are bitwise identical for any worker count") {
  RandomStream rng(501, 0);
  auto ds = generate_example1(12, 5, 2.0, 3.0, rng);
  auto r1 = run_parallel(stage_one_plan(ds, 1, 99));
  auto r8 = run_parallel(stage_one_plan(ds, 8, 99));
  REQUIRE(r1.draws.size() == r8.draws.size());
  for (std::size_t j = 0; j < r1.draws.size(); ++j) {
    CHECK(r1.draws[j].source_id == r8.draws[j].source_id);
    CHECK(r1.draws[j].draws == r8.draws[j].draws);
  }
}

TEST_CASE("results depend on the seed and source id, not the task order") {
  RandomStream rng(502, 0);
  auto ds = generate_example1(6, 5, 2.0, 3.0, rng);
  auto plan = stage_one_plan(ds, 2, 7);
  auto shuffled = stage_one_plan(ds, 2, 7);
  std::swap(shuffled.tasks[0], shuffled.tasks[5]);
  std::swap(shuffled.tasks[1], shuffled.tasks[3]);
  auto a = run_parallel(plan);
  auto b = run_parallel(shuffled);
  for (std::size_t j = 0; j < a.draws.size(); ++j) {
    CHECK(a.draws[j].source_id == b.draws[j].source_id);
    CHECK(a.draws[j].draws == b.draws[j].draws);
  }
}

TEST_CASE("empty plan gives an empty result") {
  TaskPlan plan;
  auto res = run_parallel(plan);
  CHECK(res.draws.empty());
  CHECK(res.task_seconds.empty());
}

TEST_CASE("task failure aborts the batch with the failing source id") {
  TaskPlan plan;
  plan.base_seed = 1;
  plan.workers = 2;
  for (int j = 1; j <= 4; ++j) {
    plan.tasks.push_back({j, [j](RandomStream& rng) {
                            if (j == 3) throw DomainError("boom");
                            Matrix m(3, 1);
                            m << rng.normal(), rng.normal(), rng.normal();
                            return summarize_draws(j, m);
                          }});
  }
  try {
    run_parallel(plan);
    FAIL("expected TaskError");
  } catch (const TaskError& e) {
    CHECK(e.source_id == 3);
  }
}

TEST_CASE("duplicate source ids are rejected") {
  TaskPlan plan;
  plan.tasks.push_back({1, [](RandomStream&) { return SourceDraws{}; }});
  plan.tasks.push_back({1, [](RandomStream&) { return SourceDraws{}; }});
  CHECK_THROWS_AS(run_parallel(plan), InputError);
}

TEST_CASE("per-task times are recorded and positive") {
  RandomStream rng(503, 0);
  auto ds = generate_example1(5, 20, 2.0, 3.0, rng);
  auto res = run_parallel(stage_one_plan(ds, 0, 3));
  REQUIRE(res.task_seconds.size() == 5);
  for (double s : res.task_seconds) CHECK(s > 0.0);
  CHECK(res.wall_seconds > 0.0);
}

TEST_CASE("parallel speedup on multicore hardware") {
  // Timing claim only meaningful with real cores available.
  if (std::thread::hardware_concurrency() < 8) {
    MESSAGE("skipping speedup measurement: fewer than 8 hardware threads");
    return;
  }
  RandomStream rng(504, 0);
  auto ds = generate_example1(40, 50, 2.0, 3.0, rng);
  TaskPlan serial;
  serial.workers = 1;
  serial.base_seed = 11;
  TaskPlan wide;
  wide.workers = 8;
  wide.base_seed = 11;
  for (const auto& src : ds.sources) {
    auto task = [&src](RandomStream& r) {
      return indep_normal(src, 0.0, 1.0, 200000, r);
    };
    serial.tasks.push_back({src.source_id, task});
    wide.tasks.push_back({src.source_id, task});
  }
  auto t1 = run_parallel(serial);
  auto t8 = run_parallel(wide);
  CHECK(t8.wall_seconds < 0.25 * t1.wall_seconds);
}
