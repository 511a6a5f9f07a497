#include <benchmark/benchmark.h>

// The distro's libbenchmark_main.a ships LTO bytecode from another gcc, so main lives here.
BENCHMARK_MAIN();
