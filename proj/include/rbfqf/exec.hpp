#pragma once

namespace rbfqf {

/// Selects the OpenMP loop or the plain serial loop for the data-parallel
/// kernels. Both paths produce bit-identical results; the serial one is the
/// reference used by the tests and the benchmarks.
enum class Exec { serial, parallel };

inline bool is_parallel(Exec e) noexcept { return e == Exec::parallel; }

} // namespace rbfqf
