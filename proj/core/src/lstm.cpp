#include "lstmsv/lstm.hpp"
#include "lstmsv/math.hpp"

#include <cmath>

namespace lstmsv::models {

LstmState lstm_cell(double x, const LstmState& s, const LstmWeights& w) noexcept {
    const double gf = sigmoid(w.v_f * x + w.w_f * s.h + w.b_f);
    const double gi = sigmoid(w.v_i * x + w.w_i * s.h + w.b_i);
    const double xd = sigmoid(w.v_d * x + w.w_d * s.h + w.b_d);
    const double go = sigmoid(w.v_o * x + w.w_o * s.h + w.b_o);
    LstmState next;
    next.c = gf * s.c + gi * xd;
    next.h = go * std::tanh(next.c);
    next.eta_prev = x;
    return next;
}

}  // namespace lstmsv::models
