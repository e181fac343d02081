// Copyright (c) 2026 The Unifront Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "unifront/optimizer.h"

#include <cmath>
#include <stdexcept>

namespace unifront {

void AccumulateGradients(const Graph& g, double scale, GradientMap* into) {
  for (const auto& [param, grad] : g.param_grads()) {
    auto it = into->find(param);
    if (it == into->end()) {
      into->emplace(param, scale * grad);
    } else {
      it->second += scale * grad;
    }
  }
}

Adam::Adam(std::vector<Parameter*> params, const AdamConfig& config)
    : params_(std::move(params)), config_(config) {
  for (Parameter* p : params_) {
    m_.push_back(Matrix::Zero(p->value().rows(), p->value().cols()));
    v_.push_back(Matrix::Zero(p->value().rows(), p->value().cols()));
  }
}

double Adam::Step(const GradientMap& grads) {
  double sq = 0.0;
  for (Parameter* p : params_) {
    auto it = grads.find(p);
    if (it != grads.end()) sq += it->second.squaredNorm();
  }
  const double norm = std::sqrt(sq);
  const double clip = config_.clip_norm > 0.0 && norm > config_.clip_norm
                          ? config_.clip_norm / norm
                          : 1.0;
  ++steps_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(steps_));
  for (size_t i = 0; i < params_.size(); ++i) {
    auto it = grads.find(params_[i]);
    if (it == grads.end()) {
      m_[i] *= config_.beta1;
      v_[i] *= config_.beta2;
    } else {
      const Matrix g = clip * it->second;
      m_[i] = config_.beta1 * m_[i] + (1.0 - config_.beta1) * g;
      v_[i] = config_.beta2 * v_[i] + (1.0 - config_.beta2) * g.cwiseAbs2();
    }
    params_[i]->value().array() -=
        config_.learning_rate * (m_[i].array() / c1) /
        ((v_[i].array() / c2).sqrt() + config_.epsilon);
  }
  return norm;
}

void Adam::ExportState(Checkpoint* ckpt) const {
  ckpt->header["adam_steps"] = steps_;
  for (size_t i = 0; i < params_.size(); ++i) {
    ckpt->Add("adam.m/" + params_[i]->name(), m_[i]);
    ckpt->Add("adam.v/" + params_[i]->name(), v_[i]);
  }
}

void Adam::ImportState(const Checkpoint& ckpt) {
  if (!ckpt.header.contains("adam_steps")) {
    throw std::runtime_error("checkpoint has no optimizer state");
  }
  steps_ = ckpt.header.at("adam_steps").get<int64_t>();
  for (size_t i = 0; i < params_.size(); ++i) {
    const Matrix* m = ckpt.Find("adam.m/" + params_[i]->name());
    const Matrix* v = ckpt.Find("adam.v/" + params_[i]->name());
    if (m == nullptr || v == nullptr || m->rows() != m_[i].rows() ||
        m->cols() != m_[i].cols() || v->rows() != v_[i].rows() ||
        v->cols() != v_[i].cols()) {
      throw std::runtime_error("checkpoint optimizer state does not match '" +
                               params_[i]->name() + "'");
    }
    m_[i] = *m;
    v_[i] = *v;
  }
}

}  // namespace unifront
