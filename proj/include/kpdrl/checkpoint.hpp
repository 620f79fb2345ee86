#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "kpdrl/a2c.hpp"

namespace kpdrl {

// Checkpoint layout: a text header terminated by the "data" line, then raw
// little-endian IEEE-754 doubles.
//
//   kpdrl-checkpoint 1
//   N <n>
//   policy <d0> <d1> ... <dk>
//   value <d0> <d1> ... 1
//   rmsprop <lr> <decay> <eps>
//   data <count>
//   <policy params><value params><policy accumulators><value accumulators>
//
// Each network's parameters are stored layer by layer: row-major weights,
// then biases.

void save_checkpoint(const ActorCritic &ac, std::ostream &out);
void save_checkpoint(const ActorCritic &ac, const std::filesystem::path &path);

/// Throws ParseError for malformed or truncated input and DimensionError if
/// `expected_items` is given and differs from the stored N.
ActorCritic load_checkpoint(std::istream &in, std::optional<std::size_t> expected_items = {});
ActorCritic load_checkpoint(const std::filesystem::path &path,
                            std::optional<std::size_t> expected_items = {});

} // namespace kpdrl
