#pragma once

#include <ostream>

/// Fast property checks; prints one PASS/FAIL line each. True when all pass.
bool run_selftest(std::ostream& out, int threads);
