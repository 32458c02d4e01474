#include "lstmsv/random_field.hpp"
#include "lstmsv/errors.hpp"
#include "lstmsv/math.hpp"

#include <algorithm>
#include <numeric>

namespace lstmsv::filter {

RandomField::RandomField(std::size_t T, std::size_t N, std::size_t G, Rng& rng)
    : T_(T), N_(N), G_(std::min(G, T)) {
    if (T == 0 || N == 0 || G == 0)
        throw SizeError("random field needs T, N and G of at least 1");
    if (N > UINT32_MAX) throw SizeError("random field: too many particles");
    begin_.assign(G_ + 1, T_);
    // block(t) = ceil((t+1)·G/T) − 1 is nondecreasing in t; record first steps.
    for (std::size_t t = T_; t-- > 0;) begin_[block_of(t)] = t;
    proposal_.resize(T_ * N_);
    resample_.resize((T_ - 1) * N_);
    uniform_.resize((T_ - 1) * N_);
    order_.resize((T_ - 1) * N_);
    draw_rows(0, T_, rng);
}

std::size_t RandomField::block_of(std::size_t t) const noexcept {
    return ((t + 1) * G_ + T_ - 1) / T_ - 1;
}

void RandomField::draw_rows(std::size_t first, std::size_t last, Rng& rng) {
    std::normal_distribution<double> normal;
    for (std::size_t t = first; t < last; ++t) {
        for (std::size_t k = 0; k < N_; ++k) proposal_[t * N_ + k] = normal(rng);
        if (t + 1 < T_) {
            for (std::size_t k = 0; k < N_; ++k) resample_[t * N_ + k] = normal(rng);
            update_cache(t);
        }
    }
}

void RandomField::update_cache(std::size_t t) {
    double* u = uniform_.data() + t * N_;
    const double* r = resample_.data() + t * N_;
    for (std::size_t k = 0; k < N_; ++k) u[k] = normal_cdf(r[k]);
    std::uint32_t* ord = order_.data() + t * N_;
    std::iota(ord, ord + N_, 0u);
    std::sort(ord, ord + N_, [u](std::uint32_t a, std::uint32_t b) {
        return u[a] < u[b] || (u[a] == u[b] && a < b);
    });
}

void RandomField::refresh_block(std::size_t b, Rng& rng) {
    if (b >= G_) throw SizeError("refresh_block: block index out of range");
    const std::size_t first = begin_[b];
    const std::size_t last = begin_[b + 1];
    const std::size_t rlast = std::min(last, T_ - 1);
    const std::size_t rcount = rlast > first ? (rlast - first) * N_ : 0;

    saved_block_ = b;
    saved_proposal_.assign(proposal_.begin() + first * N_, proposal_.begin() + last * N_);
    saved_resample_.assign(resample_.begin() + first * N_, resample_.begin() + first * N_ + rcount);
    saved_uniform_.assign(uniform_.begin() + first * N_, uniform_.begin() + first * N_ + rcount);
    saved_order_.assign(order_.begin() + first * N_, order_.begin() + first * N_ + rcount);
    pending_ = true;
    draw_rows(first, last, rng);
}

void RandomField::restore() {
    if (!pending_) return;
    const std::size_t first = begin_[saved_block_];
    std::copy(saved_proposal_.begin(), saved_proposal_.end(), proposal_.begin() + first * N_);
    std::copy(saved_resample_.begin(), saved_resample_.end(), resample_.begin() + first * N_);
    std::copy(saved_uniform_.begin(), saved_uniform_.end(), uniform_.begin() + first * N_);
    std::copy(saved_order_.begin(), saved_order_.end(), order_.begin() + first * N_);
    pending_ = false;
}

}  // namespace lstmsv::filter
