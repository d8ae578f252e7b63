#pragma once

// Every data-parallel kernel in the library comes in two flavours: a plain
// serial loop, kept as the reference implementation the tests compare
// against, and an OpenMP version. Both produce bit-identical results; the
// parallel versions never reduce across threads in a scheduling-dependent
// order.

namespace qgol {

enum class Exec { serial, parallel };

/// Number of OpenMP workers currently configured (1 without OpenMP).
int worker_count();

/// Sets the OpenMP worker count; n <= 0 restores the runtime default.
void set_worker_count(int n);

} // namespace qgol
