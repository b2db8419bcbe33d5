#pragma once

#include <map>
#include <string>
#include <vector>

#include "dmbgn/nn.hpp"

namespace dmbgn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Bias-corrected Adam over a ParamStore. Moment state is keyed by parameter
/// name so freezing or thawing entries mid-run cannot misalign it.
class Adam {
 public:
  explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

  /// One update from the gradients currently held in the store. Entries that
  /// are frozen or have no accumulated gradient are left untouched.
  void step(nn::ParamStore& params);

  long long steps_taken() const { return t_; }

 private:
  struct Moments {
    std::vector<double> m, v;
  };
  AdamConfig cfg_;
  long long t_ = 0;
  std::map<std::string, Moments> state_;
};

}  // namespace dmbgn
