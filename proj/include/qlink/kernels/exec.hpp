#pragma once

namespace qlink::kernels {

/// Execution policy for the dense kernels. `serial` is the reference
/// implementation; `parallel` distributes work over OpenMP threads. Every
/// kernel computes each output element in exactly one thread with a fixed
/// summation order, so the two policies produce bit-identical results.
enum class Exec { serial, parallel };

/// Process-wide default used by the higher-level routines.
inline Exec& default_exec() {
    static Exec e = Exec::parallel;
    return e;
}

} // namespace qlink::kernels
