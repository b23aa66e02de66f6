#define HARDY_KERNELS_PARALLEL 0
#define HARDY_KERNELS_NS serial
#include "kernels_impl.hpp"
