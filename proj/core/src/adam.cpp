#include "dmbgn/adam.hpp"

#include <cmath>

namespace dmbgn {

void Adam::step(nn::ParamStore& params) {
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (auto& e : params.entries()) {
    if (!e.trainable || e.tensor->grad.empty()) continue;
    auto& mom = state_[e.name];
    if (mom.m.size() != e.tensor->numel()) {
      mom.m.assign(e.tensor->numel(), 0.0);
      mom.v.assign(e.tensor->numel(), 0.0);
    }
    auto& data = e.tensor->data;
    auto& grad = e.tensor->grad;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double g = grad[i];
      mom.m[i] = cfg_.beta1 * mom.m[i] + (1.0 - cfg_.beta1) * g;
      mom.v[i] = cfg_.beta2 * mom.v[i] + (1.0 - cfg_.beta2) * g * g;
      const double mhat = mom.m[i] / bc1;
      const double vhat = mom.v[i] / bc2;
      data[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  }
}

}  // namespace dmbgn
