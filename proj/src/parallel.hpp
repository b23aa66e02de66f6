// Coarse task parallelism for independent jobs inside one module call.
#ifndef HARDY_PARALLEL_HPP
#define HARDY_PARALLEL_HPP

#include "hardy/kernels.hpp"

#include <exception>
#include <functional>
#include <mutex>
#include <vector>

namespace hardy::detail
{

//! runs every job, under OpenMP when the parallel backend is active; rethrows the first failure
inline void run_all(std::vector<std::function<void()>>& jobs)
{
  std::mutex m;
  std::exception_ptr first;
  const auto n = static_cast<std::ptrdiff_t>(jobs.size());
  const bool par = kernels::backend() == kernels::Backend::parallel;
#pragma omp parallel for schedule(dynamic, 1) if(par)
  for(std::ptrdiff_t i = 0; i < n; ++i)
  {
    try
    {
      jobs[i]();
    }
    catch(...)
    {
      std::lock_guard lock(m);
      if(!first)
        first = std::current_exception();
    }
  }
  if(first)
    std::rethrow_exception(first);
}

} // namespace hardy::detail

#endif // HARDY_PARALLEL_HPP
