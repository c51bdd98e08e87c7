#include "sdiov/predictor.hpp"

#include <algorithm>

#include "sdiov/errors.hpp"

namespace sdiov {

NlmsState::NlmsState(std::size_t window, double step_size)
    : window_(window), step_size_(step_size), weights_(window, 0.0) {
  if (window < 2) throw ValidationError("window", "must be at least 2");
  if (!(step_size > 0.0 && step_size < 2.0)) {
    throw ValidationError("step_size", "must lie in (0, 2)");
  }
  weights_[0] = 1.0;
}

void NlmsState::set_weights(std::vector<double> weights) {
  if (weights.size() != window_) throw ValidationError("weights", "length must equal window");
  weights_ = std::move(weights);
}

double NlmsState::raw_prediction() const {
  double y = 0.0;
  for (std::size_t i = 0; i < history_.size(); ++i) y += weights_[i] * history_[i];
  return y;
}

NlmsState observe(NlmsState state, double sample) {
  sample = std::clamp(sample, 0.0, 1.0);
  if (state.warmed_up()) {
    const double error = sample - state.raw_prediction();
    double energy = 0.0;
    for (double h : state.history_) energy += h * h;
    if (energy > 0.0) {
      const double gain = state.step_size_ * error / energy;
      for (std::size_t i = 0; i < state.window_; ++i) {
        state.weights_[i] += gain * state.history_[i];
      }
    }
    state.last_error_ = error;
    state.history_.pop_back();
  }
  state.history_.push_front(sample);
  return state;
}

double predict(const NlmsState& state) {
  if (state.history().empty()) return 0.0;
  if (!state.warmed_up()) return state.history().front();
  return std::clamp(state.raw_prediction(), 0.0, 1.0);
}

double prediction_error(const NlmsState& state, double actual) {
  return actual - predict(state);
}

}  // namespace sdiov
