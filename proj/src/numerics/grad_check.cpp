// ----------------------------------------------------------------------------
// Copyright 2026 The GLAN Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ----------------------------------------------------------------------------

#include "glan/numerics/grad_check.hpp"

#include <cmath>
#include <sstream>

namespace glan {

namespace {

struct Probe {
  double loss;
  std::uint64_t signature;
};

Probe evaluate(const LossBuilder& loss_fn) {
  Tape<double> tape(false);
  tape.track_branches(true);
  Var loss = loss_fn(tape);
  return {tape.value(loss)[0], tape.branch_signature()};
}

}  // namespace

GradCheckReport grad_check(const LossBuilder& loss_fn, std::span<Parameter<double>* const> params,
                           double eps) {
  if (!(eps >= 1e-6 && eps <= 1e-3)) throw DomainError("grad_check: eps must lie in [1e-6, 1e-3]");
  GradCheckReport report;

  for (Parameter<double>* p : params) p->zero_grad();
  Probe base;
  {
    Tape<double> tape(true);
    tape.track_branches(true);
    Var loss = loss_fn(tape);
    base = {tape.value(loss)[0], tape.branch_signature()};
    tape.backward(loss);
  }
  const Probe again = evaluate(loss_fn);
  if (again.loss != base.loss || again.signature != base.signature) {
    report.valid = false;
    report.message = "loss function is not deterministic";
    return report;
  }

  for (Parameter<double>* p : params) {
    const Tensor<double> analytic = p->grad.empty() ? Tensor<double>(p->value.shape()) : p->grad;
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      const double saved = p->value[i];
      p->value[i] = saved + eps;
      const Probe plus = evaluate(loss_fn);
      p->value[i] = saved - eps;
      const Probe minus = evaluate(loss_fn);
      p->value[i] = saved;
      if (plus.signature != base.signature || minus.signature != base.signature) {
        ++report.flagged;
        continue;
      }
      const double central = (plus.loss - minus.loss) / (2 * eps);
      const double rel = std::abs(analytic[i] - central) / std::max(1.0, std::abs(central));
      ++report.checked;
      if (rel > report.max_rel_error || !std::isfinite(rel)) {
        report.max_rel_error = std::isfinite(rel) ? rel : INFINITY;
        report.worst_param = p->name;
        report.worst_index = i;
      }
    }
  }

  std::ostringstream msg;
  msg << "checked " << report.checked << " entries, flagged " << report.flagged
      << ", max relative error " << report.max_rel_error;
  if (!report.worst_param.empty()) msg << " at " << report.worst_param << "[" << report.worst_index << "]";
  report.message = msg.str();
  return report;
}

}  // namespace glan
