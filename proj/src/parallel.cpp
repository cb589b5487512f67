#include "ringlab/parallel.hpp"

#include <omp.h>

namespace ringlab {

int resolved_threads(const ExecPolicy& policy) {
  if (policy.mode == Execution::Serial) return 1;
  return policy.threads > 0 ? policy.threads : omp_get_max_threads();
}

}  // namespace ringlab
