// Copyright 2026 The robust-mfg Authors
//
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

#include "rmfg/ambiguity.hpp"

#include <stdexcept>

namespace rmfg {

AmbiguityFamily AmbiguityFamily::singleton(TransitionKernelTable reference) {
  AmbiguityFamily out;
  out.horizon_ = reference.horizon();
  out.num_states_ = reference.num_states();
  out.num_actions_ = reference.num_actions();
  out.kinds_.assign(out.horizon_, AmbiguityKind::kSingleton);
  out.reference_table_ = std::move(reference);
  return out;
}

AmbiguityFamily AmbiguityFamily::finite_set(
    std::vector<TransitionKernelTable> members) {
  if (members.empty())
    throw std::invalid_argument("AmbiguityFamily: empty finite set");
  AmbiguityFamily out;
  out.horizon_ = members.front().horizon();
  out.num_states_ = members.front().num_states();
  out.num_actions_ = members.front().num_actions();
  for (const auto& m : members) {
    if (m.horizon() != out.horizon_ || m.num_states() != out.num_states_ ||
        m.num_actions() != out.num_actions_)
      throw std::invalid_argument("AmbiguityFamily: inconsistent member shapes");
  }
  out.kinds_.assign(out.horizon_, AmbiguityKind::kFiniteSet);
  out.members_ = std::move(members);
  return out;
}

AmbiguityFamily AmbiguityFamily::wasserstein_ball(TransitionKernelTable reference,
                                                  double radius) {
  if (radius < 0.0)
    throw std::invalid_argument("AmbiguityFamily: negative radius");
  AmbiguityFamily out;
  out.horizon_ = reference.horizon();
  out.num_states_ = reference.num_states();
  out.num_actions_ = reference.num_actions();
  out.kinds_.assign(out.horizon_, AmbiguityKind::kWassersteinBall);
  out.radius_ = radius;
  out.reference_table_ = std::move(reference);
  return out;
}

AmbiguityFamily AmbiguityFamily::wasserstein_ball(KernelGenerator reference,
                                                  double radius, int horizon,
                                                  int num_states,
                                                  int num_actions) {
  if (radius < 0.0)
    throw std::invalid_argument("AmbiguityFamily: negative radius");
  if (!reference)
    throw std::invalid_argument("AmbiguityFamily: null reference generator");
  AmbiguityFamily out;
  out.horizon_ = horizon;
  out.num_states_ = num_states;
  out.num_actions_ = num_actions;
  out.kinds_.assign(horizon, AmbiguityKind::kWassersteinBall);
  out.radius_ = radius;
  out.generator_ = std::move(reference);
  return out;
}

bool AmbiguityFamily::is_effectively_singleton() const {
  for (AmbiguityKind k : kinds_) {
    switch (k) {
      case AmbiguityKind::kSingleton:
        break;
      case AmbiguityKind::kWassersteinBall:
        if (radius_ > 0.0) return false;
        break;
      case AmbiguityKind::kFiniteSet:
        if (members_.size() > 1) return false;
        break;
    }
  }
  return true;
}

DiscreteDistribution AmbiguityFamily::reference_row(
    int t, int s, int a, const DiscreteDistribution& mu) const {
  if (kinds_.at(t) == AmbiguityKind::kFiniteSet) return members_.front().at(t, s, a);
  if (reference_table_) return reference_table_->at(t, s, a);
  return generator_(t, s, a, mu);
}

const TransitionKernelTable* AmbiguityFamily::reference_table() const {
  return reference_table_ ? &*reference_table_ : nullptr;
}

AmbiguityInstance AmbiguityFamily::instance(int t, int s, int a,
                                            const DiscreteDistribution& mu,
                                            const CostMatrix& state_cost) const {
  AmbiguityInstance out;
  out.kind = kinds_.at(t);
  switch (out.kind) {
    case AmbiguityKind::kSingleton:
      out.reference = reference_row(t, s, a, mu);
      break;
    case AmbiguityKind::kFiniteSet:
      out.members.reserve(members_.size());
      for (const auto& m : members_) out.members.push_back(m.at(t, s, a));
      out.reference = out.members.front();
      break;
    case AmbiguityKind::kWassersteinBall:
      out.reference = reference_row(t, s, a, mu);
      out.radius = radius_;
      out.cost = &state_cost;
      break;
  }
  return out;
}

}  // namespace rmfg
