#pragma once

#include <cstddef>
#include <deque>
#include <vector>

namespace sdiov {

// Normalized LMS one-step-ahead predictor over a window of the most recent
// samples. Weights start as a pure last-value filter [1, 0, ..., 0].
class NlmsState {
 public:
  NlmsState(std::size_t window = 8, double step_size = 0.5);

  std::size_t window() const { return window_; }
  double step_size() const { return step_size_; }
  const std::vector<double>& weights() const { return weights_; }
  // Most recent sample first.
  const std::deque<double>& history() const { return history_; }
  double last_error() const { return last_error_; }
  bool warmed_up() const { return history_.size() == window_; }

  void set_weights(std::vector<double> weights);

  // Unclamped filter output over the stored history; only meaningful once
  // warmed up.
  double raw_prediction() const;

  friend NlmsState observe(NlmsState state, double sample);

 private:
  std::size_t window_;
  double step_size_;
  std::vector<double> weights_;
  std::deque<double> history_;
  double last_error_ = 0.0;
};

// Push a sample (clamped to [0, 1]). Once the window is full, the a-priori
// error of the filter against the new sample adapts the weights along the
// previous history vector, normalized by its energy. An all-zero history
// leaves the weights unchanged.
NlmsState observe(NlmsState state, double sample);

// One-step-ahead prediction in [0, 1]. During warm-up, the last sample (0 if
// none).
double predict(const NlmsState& state);

// actual - predict(state).
double prediction_error(const NlmsState& state, double actual);

}  // namespace sdiov
