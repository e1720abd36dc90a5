#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace gkl {

enum class Smoothness { Finite, Infinite };

/// A symmetric strictly-positive-definite kernel together with the metadata
/// the analysis layer needs. Immutable after construction; evaluation is a
/// pure function and safe to call concurrently.
struct KernelModel {
  std::string name;
  std::map<std::string, double> params;
  Smoothness smoothness = Smoothness::Infinite;
  double tau = 0.0;  // smoothness order, meaningful for Smoothness::Finite
  int dim = 1;
  std::function<double(std::span<const double>, std::span<const double>)> eval;
};

/// k(x, y). Throws std::invalid_argument on dimension mismatch.
double kernel_eval(const KernelModel& model, std::span<const double> x,
                   std::span<const double> y);

/// k(x, x).
double kernel_diag(const KernelModel& model, std::span<const double> x);

using KernelFactory = std::function<KernelModel(int dim)>;

/// Registers a kernel under `name`. Replaces an existing entry.
void register_kernel(const std::string& name, KernelFactory factory);

/// Builds a registered kernel for the given dimension.
/// Built-ins: "gaussian_w2" (exp(-4||x-y||^2), any dim) and
/// "wendland_k0" (max(1-|x-y|, 0), dim 1 only).
KernelModel make_kernel(const std::string& name, int dim);

std::vector<std::string> registered_kernels();

}  // namespace gkl
