#pragma once

#include "aoii/generator.hpp"

namespace aoii::bench {

// Benchmark sources used by the bundled experiment presets and tests.

// q1: five homogeneous states, every off-diagonal rate 0.25.
GeneratorMatrix q1();
// q2: three heterogeneous states.
GeneratorMatrix q2();
// q3: two states with holding rates 0.5 and 0.75.
GeneratorMatrix q3();

// Lookup by name ("q1" | "q2" | "q3"); throws ConfigError otherwise.
GeneratorMatrix by_name(const std::string &name);

} // namespace aoii::bench
