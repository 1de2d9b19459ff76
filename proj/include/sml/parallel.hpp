#pragma once
// Cell runner for embarrassingly parallel Monte Carlo sweeps. Each cell is
// a pure function of its index (seeds derive from the index, never from the
// thread), so the OpenMP path and the serial reference produce identical
// results; the serial path is kept for testing and benchmarking.

#include <functional>

namespace sml {

// fn(i) for i in [0, n): plain loop.
void for_each_cell_serial(int n, const std::function<void(int)>& fn);

// fn(i) for i in [0, n) over OpenMP threads (dynamic schedule).
// threads <= 0 uses the OpenMP default; threads == 1 falls back to the
// serial reference.
void for_each_cell(int n, int threads, const std::function<void(int)>& fn);

int hardware_threads();

}  // namespace sml
