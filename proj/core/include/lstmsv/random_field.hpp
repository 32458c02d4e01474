#pragma once

#include "lstmsv/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lstmsv::filter {

/// The standard-normal draws consumed by one particle-filter pass.
///
/// Row t of the proposal draws U^P (T×N) drives the propagation of the N
/// particles at step t; row t of the resampling draws U^R ((T−1)×N) is mapped
/// through Φ to the uniforms that pick ancestors for step t+1. Time step t
/// (1-based) together with both of its rows belongs to block ⌈t·G/T⌉, so each
/// block is a contiguous time span and block sizes differ by at most one row.
///
/// Φ(U^R) and its ascending order are cached per row; refresh_block() keeps
/// the caches in step and remembers the replaced rows so that restore() can
/// undo one refresh.
class RandomField {
public:
    /// Throws SizeError unless T ≥ 1, N ≥ 1 and G ≥ 1. G is clamped to T.
    RandomField(std::size_t T, std::size_t N, std::size_t G, Rng& rng);

    [[nodiscard]] std::size_t steps() const noexcept { return T_; }
    [[nodiscard]] std::size_t particles() const noexcept { return N_; }
    [[nodiscard]] std::size_t block_count() const noexcept { return G_; }

    /// 0-based block of 0-based time step t.
    [[nodiscard]] std::size_t block_of(std::size_t t) const noexcept;
    /// Half-open range [first, last) of time steps in block b.
    [[nodiscard]] std::size_t block_begin(std::size_t b) const noexcept { return begin_[b]; }
    [[nodiscard]] std::size_t block_end(std::size_t b) const noexcept { return begin_[b + 1]; }

    [[nodiscard]] std::span<const double> proposal(std::size_t t) const noexcept {
        return {proposal_.data() + t * N_, N_};
    }
    [[nodiscard]] std::span<const double> resample_normals(std::size_t t) const noexcept {
        return {resample_.data() + t * N_, N_};
    }
    /// Φ(U^R_t), in particle order.
    [[nodiscard]] std::span<const double> uniforms(std::size_t t) const noexcept {
        return {uniform_.data() + t * N_, N_};
    }
    /// Permutation sorting uniforms(t) ascending.
    [[nodiscard]] std::span<const std::uint32_t> uniform_order(std::size_t t) const noexcept {
        return {order_.data() + t * N_, N_};
    }

    /// Redraw every normal in block b from `rng`, in time order with the
    /// proposal row before the resampling row.
    void refresh_block(std::size_t b, Rng& rng);
    /// Undo the most recent refresh_block(). No-op if there is none pending.
    void restore();
    /// Forget the pending refresh so that restore() becomes a no-op.
    void commit() noexcept { pending_ = false; }

private:
    void draw_rows(std::size_t first, std::size_t last, Rng& rng);
    void update_cache(std::size_t t);

    std::size_t T_, N_, G_;
    std::vector<std::size_t> begin_;
    std::vector<double> proposal_;
    std::vector<double> resample_;
    std::vector<double> uniform_;
    std::vector<std::uint32_t> order_;

    bool pending_ = false;
    std::size_t saved_block_ = 0;
    std::vector<double> saved_proposal_;
    std::vector<double> saved_resample_;
    std::vector<double> saved_uniform_;
    std::vector<std::uint32_t> saved_order_;
};

}  // namespace lstmsv::filter
