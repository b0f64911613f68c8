#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace carleman {

using cplx = std::complex<double>;

// Pairwise (cascade) summation. Used for every quadrature and inner product
// so that results do not depend on thread count or accumulation order.
double pairwise_sum(std::span<const double> v);
cplx pairwise_sum(std::span<const cplx> v);

// Adaptive Gauss-Kronrod (G7/K15) integration to an absolute tolerance.
// The integrand must be finite on [a, b].
double integrate_adaptive(const std::function<double(double)>& f,
                          double a, double b, double abs_tol);

// Streaming log-space accumulator for sums of exp(l_i) that would overflow.
// Maintains log(sum exp(l_i)); empty sums report -inf.
class LogAccumulator {
 public:
  void add(double log_term);
  double log_sum() const;
  bool empty() const { return empty_; }

 private:
  double max_ = 0.0;
  double scaled_ = 0.0;  // sum of exp(l_i - max_)
  bool empty_ = true;
};

// Quintic smoothstep: 0 at t<=0, 1 at t>=1, C^2 at the seams.
// max |s'| = 15/8, max |s''| ~= 5.7735 on [0,1].
double smoothstep_quintic(double t);
double smoothstep_quintic_d1(double t);
double smoothstep_quintic_d2(double t);

// Least-squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);

// Chunked parallel loop over [0, n). Chunks are assigned statically, so any
// per-chunk partial results can be merged in index order afterwards and the
// outcome is independent of scheduling. Thread count is capped by the
// WORKBENCH_THREADS environment variable.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t begin, std::size_t end)>& body);
std::size_t thread_cap();

}  // namespace carleman
