#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "helpers.hpp"
#include "hpcwl/core/errors.hpp"
#include "hpcwl/perf/archive.hpp"
#include "hpcwl/perf/summarize.hpp"

namespace hpcwl::perf {
namespace {

constexpr std::int64_t GiB = 1024LL * 1024 * 1024;
constexpr std::int64_t GB = 1000LL * 1000 * 1000;

MemInfoSample mem(std::string node, UnixSeconds t, std::vector<NumaMemInfo> numa) {
  return {std::move(node), t, std::move(numa), SampleTag::periodic};
}

PerfSample counter(std::string node, UnixSeconds t, std::string_view metric, double v,
                   SampleTag tag = SampleTag::periodic) {
  return {std::move(node), t, std::string(metric), MetricKind::counter, v, tag};
}

PerfSample inst(std::string node, UnixSeconds t, std::string_view metric, double v) {
  return {std::move(node), t, std::string(metric), MetricKind::instantaneous, v,
          SampleTag::periodic};
}

TEST(MemoryPerCore, AllFreeIsZero) {
  EXPECT_EQ(memory_per_core(mem("n", 0, {{64 * GiB, 64 * GiB, 0, 0}}), 16), 0.0);
  EXPECT_EQ(memory_per_core(mem("n", 0, {{64 * GiB, 64 * GiB, 0, 0}}), 1), 0.0);
}

TEST(MemoryPerCore, SingleNumaNode) {
  EXPECT_EQ(memory_per_core(mem("n", 0, {{64 * GiB, 32 * GiB, 8 * GiB, 8 * GiB}}), 16),
            1.0 * GiB);
}

TEST(MemoryPerCore, TwoNumaNodesSum) {
  NumaMemInfo half{32 * GiB, 16 * GiB, 4 * GiB, 4 * GiB};
  EXPECT_EQ(memory_per_core(mem("n", 0, {half, half}), 16), 1.0 * GiB);
}

TEST(MemoryPerCore, InvalidInputs) {
  EXPECT_THROW(memory_per_core(mem("n", 0, {{10, 8, 2, 1}}), 1), InvalidMemInfo);
  EXPECT_THROW(memory_per_core(mem("n", 0, {{10, -1, 0, 0}}), 1), InvalidMemInfo);
  EXPECT_THROW(memory_per_core(mem("n", 0, {{10, 1, 0, 0}}), 0), InvalidMemInfo);
}

TEST(NonLustreIb, Examples) {
  auto a = non_lustre_ib(10 * GB, 4 * GB);
  EXPECT_EQ(a.bytes, 6.0 * GB);
  EXPECT_FALSE(a.clamped);
  auto b = non_lustre_ib(4 * GB, 10 * GB);
  EXPECT_EQ(b.bytes, 0.0);
  EXPECT_TRUE(b.clamped);
  EXPECT_EQ(non_lustre_ib(123.0, 0.0).bytes, 123.0);
}

TEST(LaunchType, Categories) {
  EXPECT_EQ(classify_launch_type(64, 1, true), LaunchType::multi_process);
  EXPECT_EQ(classify_launch_type(1, 1, true), LaunchType::serial);
  EXPECT_EQ(classify_launch_type(8, 4, false), LaunchType::unknown);
  EXPECT_EQ(classify_launch_type(1, 8, true), LaunchType::multi_threaded);
  EXPECT_EQ(classify_launch_type(4, 8, true), LaunchType::multi_process_multi_threaded);
}

TEST(CounterDelta, ResetContributesPostResetValue) {
  std::vector<double> r = {100, 150, 20, 50};
  auto d = counter_delta(r);
  EXPECT_TRUE(d.regressed);
  EXPECT_EQ(d.delta, 50.0 + 20.0 + 30.0);
  std::vector<double> mono = {5, 5, 9};
  EXPECT_EQ(counter_delta(mono).delta, 4.0);
  EXPECT_FALSE(counter_delta(mono).regressed);
}

JobRecord a_job(UnixSeconds start = 1000, UnixSeconds end = 5000) {
  return test::job("j", "R", start, start, end, 1, 16);
}

TEST(Summarize, CpuUserFractionFromProlog) {
  JobArchive a;
  a.nodes = {"n1"};
  a.samples = {counter("n1", 1000, metric::cpu_user, 1000, SampleTag::job_prolog),
               counter("n1", 1000, metric::cpu_total, 2000, SampleTag::job_prolog),
               counter("n1", 5000, metric::cpu_user, 1900, SampleTag::job_epilog),
               counter("n1", 5000, metric::cpu_total, 3000, SampleTag::job_epilog)};
  auto s = summarize_job(a_job(), a, 16);
  ASSERT_TRUE(s);
  ASSERT_TRUE(s->cpu_user_fraction);
  EXPECT_DOUBLE_EQ(*s->cpu_user_fraction, 0.9);
}

TEST(Summarize, NoInWindowMemorySamplesMeansAbsent) {
  JobArchive a;
  a.nodes = {"n1"};
  a.meminfo = {mem("n1", 1000, {{64 * GiB, 0, 0, 0}}), mem("n1", 5000, {{64 * GiB, 0, 0, 0}})};
  auto s = summarize_job(a_job(), a, 16);
  ASSERT_TRUE(s);
  EXPECT_FALSE(s->mem_avg_per_core);
  EXPECT_FALSE(s->mem_max_per_core);
}

TEST(Summarize, MemoryAverageAndMax) {
  JobArchive a;
  a.nodes = {"n1"};
  // 16 cores: 1, 2 and 3 GiB per core used.
  a.meminfo = {mem("n1", 2000, {{64 * GiB, 48 * GiB, 0, 0}}),
               mem("n1", 3000, {{64 * GiB, 32 * GiB, 0, 0}}),
               mem("n1", 4000, {{64 * GiB, 16 * GiB, 0, 0}})};
  auto s = summarize_job(a_job(), a, 16);
  ASSERT_TRUE(s && s->mem_avg_per_core && s->mem_max_per_core);
  EXPECT_EQ(*s->mem_avg_per_core, 2.0 * GiB);
  EXPECT_EQ(*s->mem_max_per_core, 3.0 * GiB);
  EXPECT_EQ(*s->node_mem_total, 64.0 * GiB);
}

TEST(Summarize, UnknownNodesGiveNoSummary) {
  JobArchive a;
  EXPECT_FALSE(summarize_job(a_job(), a, 16));
}

TEST(Summarize, MissingEpilogMakesCounterAbsent) {
  JobArchive a;
  a.nodes = {"n1", "n2"};
  a.samples = {counter("n1", 900, metric::lustre_rx, 0), counter("n1", 5100, metric::lustre_rx, 10),
               counter("n2", 900, metric::lustre_rx, 0), counter("n2", 4000, metric::lustre_rx, 7)};
  auto s = summarize_job(a_job(), a, 16);
  ASSERT_TRUE(s);
  EXPECT_FALSE(s->lustre_rx);
  ASSERT_FALSE(s->issues.empty());
  EXPECT_EQ(s->issues[0].code, "MissingEpilog");
  EXPECT_EQ(s->issues[0].node, "n2");
}

TEST(Summarize, CounterResetFlagged) {
  JobArchive a;
  a.nodes = {"n1"};
  a.samples = {counter("n1", 1000, metric::ib_rx, 500), counter("n1", 3000, metric::ib_rx, 100),
               counter("n1", 5000, metric::ib_rx, 300)};
  auto s = summarize_job(a_job(), a, 16);
  ASSERT_TRUE(s && s->ib_rx);
  EXPECT_EQ(*s->ib_rx, 300.0);
  EXPECT_EQ(s->issues.front().code, "CounterRegression");
}

TEST(Summarize, RunnableMedianOfConstantStream) {
  JobArchive a;
  a.nodes = {"n1"};
  for (UnixSeconds t = 1100; t < 5000; t += 600) a.samples.push_back(inst("n1", t, metric::procs_running, 16));
  auto s = summarize_job(a_job(), a, 16);
  ASSERT_TRUE(s && s->runnable_threads_median);
  EXPECT_EQ(*s->runnable_threads_median, 16.0);
}

TEST(Summarize, RunnableMedianEvenCount) {
  JobArchive a;
  a.nodes = {"n1"};
  a.samples = {inst("n1", 2000, metric::procs_running, 4), inst("n1", 3000, metric::procs_running, 10),
               inst("n1", 4000, metric::procs_running, 1), inst("n1", 4500, metric::procs_running, 7)};
  auto s = summarize_job(a_job(), a, 16);
  EXPECT_EQ(*s->runnable_threads_median, 5.5);
}

// Random job archive with counters on every node, memory and runnable samples.
JobArchive random_archive(std::mt19937_64& rng, const JobRecord& job, int n_nodes,
                          std::vector<UnixSeconds>& times) {
  std::uniform_int_distribution<int> step(60, 900);
  std::uniform_real_distribution<double> inc(0, 1e6);
  std::uniform_real_distribution<double> frac(0, 1);
  JobArchive a;
  times.clear();
  for (UnixSeconds t = job.start_time; t < job.end_time; t += step(rng)) times.push_back(t);
  times.push_back(job.end_time);
  for (int n = 0; n < n_nodes; ++n) {
    std::string node = "n" + std::to_string(n);
    a.nodes.push_back(node);
    double user = 0, total = 0, lrx = 0, ib = 0;
    for (auto t : times) {
      double u = inc(rng);
      user += u;
      total += u + inc(rng);
      lrx += inc(rng);
      ib += inc(rng);
      if (frac(rng) < 0.05) ib = inc(rng);  // occasional reset
      a.samples.push_back(counter(node, t, metric::cpu_user, user));
      a.samples.push_back(counter(node, t, metric::cpu_total, total));
      a.samples.push_back(counter(node, t, metric::lustre_rx, lrx));
      a.samples.push_back(counter(node, t, metric::ib_rx, ib));
      if (t > job.start_time && t < job.end_time) {
        a.samples.push_back(inst(node, t, metric::procs_running, std::floor(frac(rng) * 32)));
        std::int64_t total_mem = 64 * GiB;
        std::int64_t free = static_cast<std::int64_t>(frac(rng) * 32 * GiB);
        a.meminfo.push_back(mem(node, t, {{total_mem, free, GiB, GiB}}));
      }
    }
  }
  auto by_time = [](const auto& x, const auto& y) { return x.time < y.time; };
  std::stable_sort(a.samples.begin(), a.samples.end(), by_time);
  std::stable_sort(a.meminfo.begin(), a.meminfo.end(), by_time);
  return a;
}

TEST(SummarizeProperty, CounterSplitIsAdditive) {
  std::mt19937_64 rng(11);
  std::vector<UnixSeconds> times;
  for (int trial = 0; trial < 100; ++trial) {
    JobRecord job = a_job(10000, 10000 + 3600 * (1 + trial % 7));
    auto a = random_archive(rng, job, 1 + trial % 3, times);
    if (times.size() < 3) continue;
    std::uniform_int_distribution<std::size_t> pick(1, times.size() - 2);
    UnixSeconds mid = times[pick(rng)];
    JobRecord first = job, second = job;
    first.end_time = mid;
    second.start_time = mid;
    auto whole = summarize_job(job, a, 16);
    auto s1 = summarize_job(first, a, 16);
    auto s2 = summarize_job(second, a, 16);
    ASSERT_TRUE(whole && s1 && s2);
    for (auto field : {&JobPerfSummary::lustre_rx, &JobPerfSummary::ib_rx}) {
      ASSERT_TRUE((*whole).*field && (*s1).*field && (*s2).*field);
      double sum = *((*s1).*field) + *((*s2).*field);
      EXPECT_NEAR(sum, *((*whole).*field), 1e-9 * std::max(1.0, *((*whole).*field)));
    }
  }
}

TEST(SummarizeProperty, OutOfWindowSamplesChangeNothing) {
  std::mt19937_64 rng(12);
  std::vector<UnixSeconds> times;
  std::uniform_int_distribution<int> offset(1, 100000);
  for (int trial = 0; trial < 100; ++trial) {
    JobRecord job = a_job(500000, 500000 + 3600 * (1 + trial % 5));
    auto a = random_archive(rng, job, 1 + trial % 4, times);
    auto base = summarize_job(job, a, 16);
    JobArchive b = a;
    for (const auto& node : a.nodes) {
      for (int k = 0; k < 5; ++k) {
        UnixSeconds before = job.start_time - offset(rng);
        UnixSeconds after = job.end_time + offset(rng);
        b.samples.push_back(inst(node, before, metric::procs_running, 1000));
        b.samples.push_back(inst(node, after, metric::procs_running, 1000));
        b.meminfo.push_back(mem(node, before, {{64 * GiB, 0, 0, 0}}));
        b.meminfo.push_back(mem(node, after, {{64 * GiB, 0, 0, 0}}));
        b.samples.push_back(counter(node, job.end_time + offset(rng), metric::lustre_rx, 1e15));
      }
      b.samples.push_back(inst(node, job.start_time, metric::procs_running, 999));
      b.samples.push_back(inst(node, job.end_time, metric::procs_running, 999));
    }
    auto by_time = [](const auto& x, const auto& y) { return x.time < y.time; };
    std::stable_sort(b.samples.begin(), b.samples.end(), by_time);
    std::stable_sort(b.meminfo.begin(), b.meminfo.end(), by_time);
    auto changed = summarize_job(job, b, 16);
    ASSERT_TRUE(base && changed);
    EXPECT_EQ(to_json(*base), to_json(*changed));
  }
}

TEST(SummarizeProperty, Bounds) {
  std::mt19937_64 rng(13);
  std::vector<UnixSeconds> times;
  for (int trial = 0; trial < 100; ++trial) {
    JobRecord job = a_job(0, 3600 * (1 + trial % 9));
    auto a = random_archive(rng, job, 1 + trial % 3, times);
    auto s = summarize_job(job, a, 16);
    ASSERT_TRUE(s);
    if (s->cpu_user_fraction) {
      EXPECT_GE(*s->cpu_user_fraction, 0.0);
      EXPECT_LE(*s->cpu_user_fraction, 1.0);
    }
    if (s->mem_avg_per_core) {
      EXPECT_LE(*s->mem_avg_per_core, *s->mem_max_per_core);
      EXPECT_LE(*s->mem_max_per_core, 64.0 * GiB / 16);
    }
  }
}

TEST(ArchiveStore, LoadsJsonLinesAndSlicesJob) {
  std::string text =
      R"({"type":"job_nodes","job_id":"j","nodes":["n1"]})"
      "\n"
      R"({"type":"sample","node":"n1","time":500,"metric":"lnet.rx_bytes","kind":"counter","value":1})"
      "\n"
      R"({"type":"sample","node":"n1","time":1000,"metric":"lnet.rx_bytes","kind":"counter","value":5,"tag":"job_prolog"})"
      "\n"
      R"({"type":"sample","node":"n1","time":3000,"metric":"lnet.rx_bytes","kind":"counter","value":8})"
      "\n"
      R"({"type":"sample","node":"n1","time":5000,"metric":"lnet.rx_bytes","kind":"counter","value":20,"tag":"job_epilog"})"
      "\n"
      R"({"type":"sample","node":"n1","time":9000,"metric":"lnet.rx_bytes","kind":"counter","value":90})"
      "\n"
      R"({"type":"meminfo","node":"n1","time":3000,"numa":[{"mem_total":100,"mem_free":20,"file_pages":10,"slab":6}]})"
      "\n"
      R"({"type":"launcher","job_id":"j","exe":"/bin/namd2","n_processes":4,"threads_per_process":1})"
      "\n"
      R"({"type":"procs","job_id":"j","observations":[{"name":"namd2","pids":4}]})"
      "\n";
  ArchiveStore store;
  std::istringstream in(text);
  store.load(in);
  EXPECT_TRUE(store.has_nodes("j"));
  EXPECT_FALSE(store.has_nodes("other"));
  auto arch = store.job_archive(a_job());
  EXPECT_EQ(arch.nodes, std::vector<std::string>{"n1"});
  ASSERT_TRUE(arch.launcher);
  EXPECT_EQ(arch.launcher->n_processes, 4);
  ASSERT_EQ(arch.processes.size(), 1u);
  EXPECT_EQ(arch.processes[0].unique_pid_count, 4);
  auto s = summarize_job(a_job(), arch, 4);
  ASSERT_TRUE(s && s->lustre_rx);
  EXPECT_EQ(*s->lustre_rx, 15.0);
  EXPECT_EQ(*s->mem_avg_per_core, 16.0);
  EXPECT_EQ(s->launch_type, LaunchType::multi_process);
}

TEST(ArchiveStore, RejectsNegativeValues) {
  ArchiveStore store;
  std::istringstream in(
      R"({"type":"sample","node":"n1","time":500,"metric":"m","kind":"counter","value":-1})"
      "\n");
  EXPECT_THROW(store.load(in), SchemaError);
}

TEST(SummaryJson, AbsentFieldsOmitted) {
  JobPerfSummary s;
  s.job_id = "x";
  s.lustre_rx = 3;
  s.app = {"VASP", true};
  auto j = to_json(s);
  EXPECT_EQ(j["app_label"], "proprietary-masked");
  EXPECT_EQ(j["lustre_rx"], 3.0);
  EXPECT_FALSE(j.contains("mem_avg_per_core"));
}

}  // namespace
}  // namespace hpcwl::perf
