#include "lct/pipeline/batch.hpp"

#include <atomic>
#include <iomanip>
#include <sstream>
#include <thread>

#include "lct/litmus/error.hpp"

namespace lct::pipeline {

namespace {

const char* const kClassifications[] = {"Equal", "Negative", "Positive", "UBFiltered",
                                        "Failure"};

}  // namespace

int BatchSummary::total() const { return static_cast<int>(items.size()); }

int BatchSummary::count(const std::string& classification) const {
  int n = 0;
  for (const auto& item : items)
    if (item.classification == classification) ++n;
  return n;
}

std::string BatchSummary::render() const {
  size_t name_w = std::string("profile").size();
  for (const auto& [profile, counts] : per_profile) {
    (void)counts;
    name_w = std::max(name_w, profile.size());
  }
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(name_w) + 2) << "profile";
  for (const char* c : kClassifications) out << std::right << std::setw(12) << c;
  out << std::right << std::setw(12) << "total" << "\n";
  for (const auto& [profile, counts] : per_profile) {
    out << std::left << std::setw(static_cast<int>(name_w) + 2) << profile;
    int row_total = 0;
    for (const char* c : kClassifications) {
      auto it = counts.find(c);
      int n = it == counts.end() ? 0 : it->second;
      row_total += n;
      out << std::right << std::setw(12) << n;
    }
    out << std::right << std::setw(12) << row_total << "\n";
  }
  return out.str();
}

BatchSummary run_batch(const std::vector<litmus::LitmusTest>& tests,
                       const std::vector<CompilerProfile>& profiles, int parallelism,
                       const PipelineOptions& opts) {
  if (parallelism < 1)
    throw Error(ErrorKind::BadConfig,
                "parallelism must be at least 1, got " + std::to_string(parallelism));

  struct Job {
    const litmus::LitmusTest* test;
    const CompilerProfile* profile;
  };
  std::vector<Job> jobs;
  jobs.reserve(tests.size() * profiles.size());
  for (const auto& test : tests)
    for (const auto& profile : profiles) jobs.push_back(Job{&test, &profile});

  // Results land at their job's index, so aggregation order is independent
  // of which worker finishes first.
  std::vector<BatchItem> results(jobs.size());
  std::atomic<size_t> next{0};

  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1)) {
      const Job& job = jobs[i];
      BatchItem item;
      item.test = job.test->name;
      item.profile = job.profile->name;
      try {
        PipelineRun run = run_pipeline(*job.test, *job.profile, opts);
        item.test = run.test_name;  // may carry the _persist suffix
        item.classification = run.classification();
        if (run.failure_message) item.failure_message = *run.failure_message;
        item.diff_json = diff_record_json(run);
      } catch (const std::exception& e) {
        // run_pipeline captures stage errors itself; this is the backstop
        // that keeps one broken run from sinking the batch.
        item.classification = "Failure";
        item.failure_message = e.what();
        item.diff_json = "";
      }
      results[i] = std::move(item);
    }
  };

  size_t n_threads = std::min(static_cast<size_t>(parallelism), jobs.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  BatchSummary summary;
  summary.items = std::move(results);
  for (const auto& item : summary.items) ++summary.per_profile[item.profile][item.classification];
  return summary;
}

}  // namespace lct::pipeline
