#pragma once

namespace elnet {

/// Execution policy for the data-parallel kernels. Serial is the reference
/// path; Parallel enables the OpenMP loops over agents / trace samples.
enum class Exec { Serial, Parallel };

}  // namespace elnet
