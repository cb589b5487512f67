#pragma once

namespace ringlab {

/// Selects between the OpenMP kernel and the serial reference path of the
/// data-parallel loops (sample batches, profile grids, radial sweeps). Both
/// paths produce bit-identical results.
enum class Execution { Serial, Parallel };

struct ExecPolicy {
  Execution mode = Execution::Parallel;
  /// 0 means the OpenMP default.
  int threads = 0;

  static ExecPolicy serial() { return {Execution::Serial, 1}; }
  static ExecPolicy parallel(int threads = 0) { return {Execution::Parallel, threads}; }
};

/// Number of workers the policy resolves to on this machine.
int resolved_threads(const ExecPolicy& policy);

}  // namespace ringlab
