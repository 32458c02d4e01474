#pragma once

#include "lstmsv/lstm.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lstmsv::models {

enum class Model { Sv, Nsv, LstmSv };

[[nodiscard]] std::string_view model_tag(Model m) noexcept;
/// Parses "sv", "nsv" or "lstmsv"; throws ConfigError otherwise.
[[nodiscard]] Model parse_model(std::string_view tag);

/// y_t = exp(z_t/2) ε_t,  z_t = μ + φ(z_{t−1} − μ) + σ ε^z_t,  z_1 ~ N(μ, σ²/(1−φ²)).
struct SvParams {
    double mu = 0.0;
    double phi = 0.0;
    double sigma2 = 1.0;
};

/// SV state equation with the Box-Cox variance link Var(y_t|z_t) = (1 + δ z_t)^{1/δ}.
struct NsvParams {
    double mu = 0.0;
    double phi = 0.0;
    double sigma2 = 1.0;
    double delta = 0.0;
};

/// z_t = η_t + φ z_{t−1},  η_t = β₀ + β₁ h_t + σ ε_t,  h_t = LSTM(η_{t−1}, h_{t−1}).
struct LstmSvParams {
    double beta0 = 0.0;
    double beta1 = 0.1;
    double phi = 0.0;
    double sigma2 = 1.0;
    LstmWeights lstm;
};

using ModelParams = std::variant<SvParams, NsvParams, LstmSvParams>;

[[nodiscard]] Model model_of(const ModelParams& p) noexcept;

/// Throws DomainError unless |φ| < 1, σ² ≥ 0, β₁ ≥ 0 and every value is finite.
/// σ² = 0 (noiseless state) and β₁ = 0 (plain AR(1)) are accepted as limiting
/// cases; the priors put no mass on them.
void validate(const ModelParams& p);

/// Parameter names in serialisation order. LSTM-SV:
/// beta0, beta1, phi, sigma2, v_f, w_f, b_f, v_i, w_i, b_i, v_d, w_d, b_d, v_o, w_o, b_o.
[[nodiscard]] std::vector<std::string> parameter_names(Model m);
[[nodiscard]] std::size_t parameter_count(Model m) noexcept;

[[nodiscard]] std::vector<double> to_vector(const ModelParams& p);
[[nodiscard]] ModelParams from_vector(Model m, std::span<const double> v);

// Unconstrained coordinates used by the samplers: φ = tanh(u), σ² = exp(u),
// β₁ = exp(u); every other parameter maps to itself.
[[nodiscard]] Eigen::VectorXd to_unconstrained(const ModelParams& p);
[[nodiscard]] ModelParams from_unconstrained(Model m, const Eigen::VectorXd& u);
/// log |∂θ/∂u| of the map above.
[[nodiscard]] double log_jacobian(Model m, const Eigen::VectorXd& u);

/// Result of one state-transition step.
struct Transition {
    double z = 0.0;
    LstmState state;  // updated recurrent state (LSTM-SV only)
    double eta = 0.0; // η_t (LSTM-SV); equals z for SV/N-SV
};

/// First latent draw. SV/N-SV: z₁ = μ + eps·σ/√(1−φ²). LSTM-SV: h₁ = 0,
/// η₁ = β₀ + σ·eps and z₁ = η₁ + φ·z0.
[[nodiscard]] Transition initial_transition(const ModelParams& p, double eps, double z0 = 0.0);

/// Step t ≥ 2 driven by the standard-normal draw `eps`.
/// SV/N-SV: z = μ + φ(z_prev − μ) + σ·eps.
/// LSTM-SV: state' = lstm_cell(state.eta_prev, state), η = β₀ + β₁ h' + σ·eps, z = η + φ z_prev.
[[nodiscard]] Transition transition(const ModelParams& p, double z_prev, const LstmState& state,
                                    double eps);

/// log p(y | z). Returns -inf (not an exception) when the N-SV variance
/// (1 + δz)^{1/δ} is undefined.
[[nodiscard]] double measurement_logdensity(const ModelParams& p, double z, double y);

/// Var(y | z); NaN when undefined (N-SV with 1 + δz ≤ 0).
[[nodiscard]] double measurement_variance(const ModelParams& p, double z);

/// |δ| below this uses the exp(z) limit of the Box-Cox link.
inline constexpr double kBoxCoxLimit = 1e-8;

}  // namespace lstmsv::models
