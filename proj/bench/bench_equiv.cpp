// Serial vs OpenMP equivalence runs over enumerated corpus goals.
//   bench_equiv [goals per program] [repetitions]
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nomhoas/harness/harness.hpp"
#include "nomhoas/nominal/parser.hpp"

#ifdef NOMHOAS_HAVE_OPENMP
#include <omp.h>
#endif

using namespace nomhoas;

int main(int argc, char** argv) {
  int count = argc > 1 ? std::atoi(argv[1]) : 200;
  int reps = argc > 2 ? std::atoi(argv[2]) : 3;
#ifdef NOMHOAS_HAVE_OPENMP
  std::cout << "threads: " << omp_get_max_threads() << "\n";
#else
  std::cout << "threads: 1 (built without OpenMP)\n";
#endif
  struct Item {
    const char* file;
    const char* pred;
    int size;
  };
  for (const Item& it : {Item{"tc.apl", "tc", 5}, Item{"spec.apl", "spec", 5}, Item{"subst.apl", "subst", 5},
                         Item{"aneq.apl", "aneq", 8}}) {
    std::ifstream f(std::string(NOMHOAS_CORPUS_DIR) + "/" + it.file);
    std::stringstream ss;
    ss << f.rdbuf();
    auto prog = nominal::parse_program(ss.str());
    harness::EnumSpec spec;
    spec.pred = it.pred;
    spec.arg_size = it.size;
    spec.count = count;
    auto goals = harness::enumerate_goals(prog, spec, SearchLimits{});
    harness::EquivContext cx(prog, harness::EquivConfig{});

    auto time = [&](auto&& fn) {
      double best = 1e300;
      for (int r = 0; r < reps; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        auto rep = fn();
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (rep.disagreements()) std::cout << "  warning: " << rep.disagreements() << " disagreements\n";
        best = std::min(best, s);
      }
      return best;
    };
    double serial = time([&] { return harness::run_equiv_serial(cx, goals); });
    double parallel = time([&] { return harness::run_equiv_parallel(cx, goals); });
    std::cout << it.pred << ": " << goals.size() << " goals  serial " << serial << " s  parallel " << parallel
              << " s  speedup " << serial / parallel << "\n";
  }
}
