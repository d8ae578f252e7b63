#include "qgol/parallel.hpp"

#include <omp.h>

namespace qgol {

namespace {
const int default_workers = omp_get_max_threads();
}

int worker_count() { return omp_get_max_threads(); }

void set_worker_count(int n) { omp_set_num_threads(n > 0 ? n : default_workers); }

} // namespace qgol
