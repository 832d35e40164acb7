#pragma once

// Data-parallel map kernels. Every kernel has a serial reference version and
// an OpenMP version with the same signature. Each output slot is written by
// exactly one iteration and no reduction happens inside the parallel region,
// so both versions produce bit-identical results.

#include <cstddef>
#include <exception>
#include <span>
#include <vector>

namespace casimir {

enum class Execution { serial, parallel };

namespace kernels {

namespace serial {

/// out[i] = f(x[i])
template <class F>
void tabulate(std::span<const double> x, std::span<double> out, F&& f) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = f(x[i]);
}

/// f(i) for i in [0, n), storing results in order.
template <class T, class F>
void generate(std::size_t n, std::vector<T>& out, F&& f) {
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
}

}  // namespace serial

namespace omp {

template <class F>
void tabulate(std::span<const double> x, std::span<double> out, F&& f) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  std::vector<std::exception_ptr> failures(x.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = f(x[i]);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }
  // lowest index wins, matching the serial version
  for (auto& e : failures)
    if (e) std::rethrow_exception(e);
}

template <class T, class F>
void generate(std::size_t n, std::vector<T>& out, F&& f) {
  out.resize(n);
  std::vector<std::exception_ptr> failures(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      out[i] = f(static_cast<std::size_t>(i));
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }
  for (auto& e : failures)
    if (e) std::rethrow_exception(e);
}

}  // namespace omp

template <class F>
void tabulate(Execution exec, std::span<const double> x, std::span<double> out, F&& f) {
  if (exec == Execution::parallel)
    omp::tabulate(x, out, std::forward<F>(f));
  else
    serial::tabulate(x, out, std::forward<F>(f));
}

template <class T, class F>
void generate(Execution exec, std::size_t n, std::vector<T>& out, F&& f) {
  if (exec == Execution::parallel)
    omp::generate(n, out, std::forward<F>(f));
  else
    serial::generate(n, out, std::forward<F>(f));
}

}  // namespace kernels
}  // namespace casimir
