#pragma once

namespace lstmsv::models {

/// Scalar LSTM cell weights. For each gate g ∈ {f, i, d, o} the pre-activation
/// is v_g·x + w_g·h + b_g, where x is the cell input and h the previous output.
struct LstmWeights {
    double v_f = 0.0, w_f = 0.0, b_f = 0.0;  // forget gate
    double v_i = 0.0, w_i = 0.0, b_i = 0.0;  // input gate
    double v_d = 0.0, w_d = 0.0, b_d = 0.0;  // data input
    double v_o = 0.0, w_o = 0.0, b_o = 0.0;  // output gate
};

/// Recurrent state carried between steps. `eta_prev` is the most recent η,
/// which is the next cell input.
struct LstmState {
    double h = 0.0;
    double c = 0.0;
    double eta_prev = 0.0;
};

/// One step of the cell driven by input `x`:
///
///   g_f = σ(v_f x + w_f h + b_f)     g_i = σ(v_i x + w_i h + b_i)
///   x_d = σ(v_d x + w_d h + b_d)     g_o = σ(v_o x + w_o h + b_o)
///   C'  = g_f C + g_i x_d            h'  = g_o tanh(C')
///
/// Note the data-input gate uses a sigmoid rather than the tanh of the usual
/// LSTM formulation, so x_d ∈ (0, 1) and the cell state only accumulates
/// positive increments. Returns {h', C', x}.
[[nodiscard]] LstmState lstm_cell(double x, const LstmState& state, const LstmWeights& w) noexcept;

}  // namespace lstmsv::models
