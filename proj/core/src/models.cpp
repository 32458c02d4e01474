#include "lstmsv/models.hpp"
#include "lstmsv/errors.hpp"
#include "lstmsv/math.hpp"

#include <cmath>
#include <numbers>

namespace lstmsv::models {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

enum class Link { Identity, Tanh, Log };

std::vector<Link> links(Model m) {
    switch (m) {
        case Model::Sv: return {Link::Identity, Link::Tanh, Link::Log};
        case Model::Nsv: return {Link::Identity, Link::Tanh, Link::Log, Link::Identity};
        case Model::LstmSv: {
            std::vector<Link> l(16, Link::Identity);
            l[1] = Link::Log;   // beta1
            l[2] = Link::Tanh;  // phi
            l[3] = Link::Log;   // sigma2
            return l;
        }
    }
    return {};
}

// log(1 − tanh(x)²) without cancellation for large |x|.
double log_sech2(double x) {
    const double a = std::abs(x);
    return 2.0 * std::numbers::ln2 - 2.0 * a - 2.0 * std::log1p(std::exp(-2.0 * a));
}

void require(bool ok, const char* what) {
    if (!ok) throw DomainError(what);
}

}  // namespace

std::string_view model_tag(Model m) noexcept {
    switch (m) {
        case Model::Sv: return "sv";
        case Model::Nsv: return "nsv";
        case Model::LstmSv: return "lstmsv";
    }
    return "?";
}

Model parse_model(std::string_view tag) {
    if (tag == "sv") return Model::Sv;
    if (tag == "nsv") return Model::Nsv;
    if (tag == "lstmsv") return Model::LstmSv;
    throw ConfigError("unknown model tag '" + std::string(tag) + "' (expected sv, nsv or lstmsv)");
}

Model model_of(const ModelParams& p) noexcept {
    return std::visit(Overloaded{[](const SvParams&) { return Model::Sv; },
                                 [](const NsvParams&) { return Model::Nsv; },
                                 [](const LstmSvParams&) { return Model::LstmSv; }},
                      p);
}

void validate(const ModelParams& p) {
    for (double v : to_vector(p)) require(std::isfinite(v), "model parameters must be finite");
    std::visit(Overloaded{[](const SvParams& s) {
                              require(std::abs(s.phi) < 1.0, "|phi| must be < 1");
                              require(s.sigma2 >= 0.0, "sigma2 must be non-negative");
                          },
                          [](const NsvParams& s) {
                              require(std::abs(s.phi) < 1.0, "|phi| must be < 1");
                              require(s.sigma2 >= 0.0, "sigma2 must be non-negative");
                          },
                          [](const LstmSvParams& s) {
                              require(std::abs(s.phi) < 1.0, "|phi| must be < 1");
                              require(s.sigma2 >= 0.0, "sigma2 must be non-negative");
                              require(s.beta1 >= 0.0, "beta1 must be non-negative");
                          }},
               p);
}

std::vector<std::string> parameter_names(Model m) {
    switch (m) {
        case Model::Sv: return {"mu", "phi", "sigma2"};
        case Model::Nsv: return {"mu", "phi", "sigma2", "delta"};
        case Model::LstmSv:
            return {"beta0", "beta1", "phi", "sigma2", "v_f", "w_f", "b_f", "v_i",
                    "w_i",   "b_i",   "v_d", "w_d",    "b_d", "v_o", "w_o", "b_o"};
    }
    return {};
}

std::size_t parameter_count(Model m) noexcept {
    switch (m) {
        case Model::Sv: return 3;
        case Model::Nsv: return 4;
        case Model::LstmSv: return 16;
    }
    return 0;
}

std::vector<double> to_vector(const ModelParams& p) {
    return std::visit(
        Overloaded{[](const SvParams& s) { return std::vector<double>{s.mu, s.phi, s.sigma2}; },
                   [](const NsvParams& s) {
                       return std::vector<double>{s.mu, s.phi, s.sigma2, s.delta};
                   },
                   [](const LstmSvParams& s) {
                       const auto& w = s.lstm;
                       return std::vector<double>{s.beta0, s.beta1, s.phi, s.sigma2, w.v_f, w.w_f,
                                                  w.b_f,   w.v_i,   w.w_i, w.b_i,    w.v_d, w.w_d,
                                                  w.b_d,   w.v_o,   w.w_o, w.b_o};
                   }},
        p);
}

ModelParams from_vector(Model m, std::span<const double> v) {
    if (v.size() != parameter_count(m))
        throw SizeError("from_vector: expected " + std::to_string(parameter_count(m)) +
                        " values for model " + std::string(model_tag(m)));
    switch (m) {
        case Model::Sv: return SvParams{v[0], v[1], v[2]};
        case Model::Nsv: return NsvParams{v[0], v[1], v[2], v[3]};
        case Model::LstmSv: {
            LstmSvParams s;
            s.beta0 = v[0];
            s.beta1 = v[1];
            s.phi = v[2];
            s.sigma2 = v[3];
            s.lstm = LstmWeights{v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11], v[12], v[13],
                                 v[14], v[15]};
            return s;
        }
    }
    throw ConfigError("from_vector: unknown model");
}

Eigen::VectorXd to_unconstrained(const ModelParams& p) {
    const auto v = to_vector(p);
    const auto l = links(model_of(p));
    Eigen::VectorXd u(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        switch (l[i]) {
            case Link::Identity: u[static_cast<Eigen::Index>(i)] = v[i]; break;
            case Link::Tanh: u[static_cast<Eigen::Index>(i)] = std::atanh(v[i]); break;
            case Link::Log: u[static_cast<Eigen::Index>(i)] = std::log(v[i]); break;
        }
    }
    return u;
}

ModelParams from_unconstrained(Model m, const Eigen::VectorXd& u) {
    const auto l = links(m);
    if (static_cast<std::size_t>(u.size()) != l.size())
        throw SizeError("from_unconstrained: dimension mismatch");
    std::vector<double> v(l.size());
    for (std::size_t i = 0; i < l.size(); ++i) {
        const double x = u[static_cast<Eigen::Index>(i)];
        switch (l[i]) {
            case Link::Identity: v[i] = x; break;
            case Link::Tanh: v[i] = std::tanh(x); break;
            case Link::Log: v[i] = std::exp(x); break;
        }
    }
    return from_vector(m, v);
}

double log_jacobian(Model m, const Eigen::VectorXd& u) {
    const auto l = links(m);
    double lj = 0.0;
    for (std::size_t i = 0; i < l.size(); ++i) {
        const double x = u[static_cast<Eigen::Index>(i)];
        if (l[i] == Link::Tanh) lj += log_sech2(x);
        else if (l[i] == Link::Log) lj += x;
    }
    return lj;
}

Transition initial_transition(const ModelParams& p, double eps, double z0) {
    return std::visit(
        Overloaded{[eps](const SvParams& s) {
                       const double z = s.mu + eps * std::sqrt(s.sigma2 / (1.0 - s.phi * s.phi));
                       return Transition{z, {}, z};
                   },
                   [eps](const NsvParams& s) {
                       const double z = s.mu + eps * std::sqrt(s.sigma2 / (1.0 - s.phi * s.phi));
                       return Transition{z, {}, z};
                   },
                   [eps, z0](const LstmSvParams& s) {
                       const double eta = s.beta0 + std::sqrt(s.sigma2) * eps;
                       Transition t;
                       t.eta = eta;
                       t.z = eta + s.phi * z0;
                       t.state = LstmState{0.0, 0.0, eta};
                       return t;
                   }},
        p);
}

Transition transition(const ModelParams& p, double z_prev, const LstmState& state, double eps) {
    return std::visit(
        Overloaded{[&](const SvParams& s) {
                       const double z = s.mu + s.phi * (z_prev - s.mu) + std::sqrt(s.sigma2) * eps;
                       return Transition{z, {}, z};
                   },
                   [&](const NsvParams& s) {
                       const double z = s.mu + s.phi * (z_prev - s.mu) + std::sqrt(s.sigma2) * eps;
                       return Transition{z, {}, z};
                   },
                   [&](const LstmSvParams& s) {
                       Transition t;
                       t.state = lstm_cell(state.eta_prev, state, s.lstm);
                       t.eta = s.beta0 + s.beta1 * t.state.h + std::sqrt(s.sigma2) * eps;
                       t.z = t.eta + s.phi * z_prev;
                       t.state.eta_prev = t.eta;
                       return t;
                   }},
        p);
}

double measurement_variance(const ModelParams& p, double z) {
    if (const auto* n = std::get_if<NsvParams>(&p)) {
        if (std::abs(n->delta) < kBoxCoxLimit) return std::exp(z);
        const double base = 1.0 + n->delta * z;
        if (!(base > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        return std::exp(std::log(base) / n->delta);
    }
    return std::exp(z);
}

double measurement_logdensity(const ModelParams& p, double z, double y) {
    if (const auto* n = std::get_if<NsvParams>(&p)) {
        if (std::abs(n->delta) >= kBoxCoxLimit) {
            const double base = 1.0 + n->delta * z;
            if (!(base > 0.0)) return kNegInf;
            const double log_var = std::log(base) / n->delta;
            return -kLogSqrt2Pi - 0.5 * log_var - 0.5 * y * y * std::exp(-log_var);
        }
    }
    return -kLogSqrt2Pi - 0.5 * z - 0.5 * y * y * std::exp(-z);
}

}  // namespace lstmsv::models
