#include "gkl/kernels.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace gkl {

namespace {

void check_dims(const KernelModel& model, std::span<const double> x,
                std::span<const double> y) {
  if (static_cast<int>(x.size()) != model.dim ||
      static_cast<int>(y.size()) != model.dim) {
    throw std::invalid_argument("kernel_eval: point dimension does not match kernel dimension");
  }
}

double sq_dist(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

std::map<std::string, KernelFactory>& registry() {
  static std::map<std::string, KernelFactory> kernels = {
      {"gaussian_w2",
       [](int dim) {
         KernelModel m;
         m.name = "gaussian_w2";
         m.smoothness = Smoothness::Infinite;
         m.dim = dim;
         m.eval = [](std::span<const double> x, std::span<const double> y) {
           return std::exp(-4.0 * sq_dist(x, y));
         };
         return m;
       }},
      {"wendland_k0",
       [](int dim) {
         if (dim != 1) {
           throw std::invalid_argument("wendland_k0 is only available in dimension 1");
         }
         KernelModel m;
         m.name = "wendland_k0";
         m.smoothness = Smoothness::Finite;
         m.tau = 1.0;
         m.dim = 1;
         m.eval = [](std::span<const double> x, std::span<const double> y) {
           return std::max(1.0 - std::abs(x[0] - y[0]), 0.0);
         };
         return m;
       }},
  };
  return kernels;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

double kernel_eval(const KernelModel& model, std::span<const double> x,
                   std::span<const double> y) {
  check_dims(model, x, y);
  return model.eval(x, y);
}

double kernel_diag(const KernelModel& model, std::span<const double> x) {
  return kernel_eval(model, x, x);
}

void register_kernel(const std::string& name, KernelFactory factory) {
  std::lock_guard lock(registry_mutex());
  registry()[name] = std::move(factory);
}

KernelModel make_kernel(const std::string& name, int dim) {
  if (dim < 1) throw std::invalid_argument("make_kernel: dim must be >= 1");
  KernelFactory factory;
  {
    std::lock_guard lock(registry_mutex());
    auto it = registry().find(name);
    if (it == registry().end()) {
      throw std::invalid_argument("make_kernel: unknown kernel '" + name + "'");
    }
    factory = it->second;
  }
  return factory(dim);
}

std::vector<std::string> registered_kernels() {
  std::lock_guard lock(registry_mutex());
  std::vector<std::string> names;
  for (const auto& [name, _] : registry()) names.push_back(name);
  return names;
}

}  // namespace gkl
