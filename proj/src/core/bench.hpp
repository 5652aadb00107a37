#pragma once

#include <cstdint>
#include <string_view>

#include "dhrg.hpp"
#include "io.hpp"

namespace dhrg {

struct TallyTiming {
  int depth = 0;
  int vertices = 0;
  int queries = 0;
  double addSeconds = 0;    // per call
  double tallySeconds = 0;  // per call
};
// Adds `vertices` uniform vertices of ring `depth` to a fresh counter, then queries `queries`
// further ones of the same ring.
TallyTiming timeAddTally(GridKind kind, int depth, int vertices, int queries, Rng& rng);

// Timing tables for the "dist", "tally" and "gen" suites. Timings vary between runs; everything
// else in the report is determined by the seed.
Report benchmark(GridKind kind, std::string_view suite, std::uint64_t seed);

}  // namespace dhrg
