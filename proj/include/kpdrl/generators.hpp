#pragma once

#include <cstdint>
#include <optional>

#include "kpdrl/instance.hpp"

namespace kpdrl {

/// Scale used for the real-valued FI family (four decimal digits).
inline constexpr std::int64_t kFixedScale = 10'000;

/// Random instances (RI): n_P ~ U{1..N}, v_i, w_i ~ U{1..R},
/// W_P ~ U{floor(R/10)..3R}, scale 1.
///
/// Instance p draws from its own stream keyed by (seed, p), in the order
/// n_P, then (v_i, w_i) pairs, then W_P.
Dataset gen_random_instances(std::int64_t m, std::int64_t n, std::int64_t r, std::uint64_t seed);

/// Fixed-capacity instances (FI): n_P = N, v_i and w_i uniform on (0, 1)
/// materialized as integers in [1, 9999] at scale 10^4.
///
/// The capacity is 12.5 for N = 50 and 37.5 for N = 300 or 500; other N
/// need `capacity` (real units, > 0).
Dataset gen_fixed_instances(std::int64_t m, std::int64_t n, std::uint64_t seed,
                            std::optional<double> capacity = std::nullopt);

/// Hard strongly-correlated instances (HI): n_P = N, w_i ~ U{1..R},
/// v_i = w_i + R/10, W_P = max(1, floor(p * sum(w) / (M + 1))).
Dataset gen_hard_instances(std::int64_t m, std::int64_t n, std::int64_t r, std::uint64_t seed);

} // namespace kpdrl
