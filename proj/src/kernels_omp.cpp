#define HARDY_KERNELS_PARALLEL 1
#define HARDY_KERNELS_NS parallel
#include "kernels_impl.hpp"
