// Runs the same ultra-low-latency workload under each architecture and under
// a cloud-only baseline, then prints the per-class summary tables.

#include <iostream>

#include "aiedge/engine.hpp"
#include "aiedge/report.hpp"

int main() {
  using namespace aiedge;

  Scenario sc;
  sc.name = "compare";
  sc.seed = 7;
  sc.workload.duration_ms = 30'000;
  sc.workload.rate_per_sec = 20;
  sc.workload.output_tokens[0] = {1, 5};
  sc.architecture.rag_over_cdn.n_documents = 1000;

  for (auto kind : kAllArchitectures) {
    sc.architecture.kind = kind;
    print_summary_table(std::cout, run(sc).report);
    std::cout << '\n';
  }

  sc.architecture.kind = ArchitectureKind::VectorCacheOnly;
  sc.cache.enabled = false;
  print_summary_table(std::cout, run(sc).report);
}
