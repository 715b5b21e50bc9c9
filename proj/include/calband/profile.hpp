#pragma once

// Joint action profiles and their integer encodings. Arms are 0-based; the
// first player is the most significant base-M digit.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace calband {

using Arm = std::size_t;
using JointProfile = std::vector<Arm>;

/// M^exponent; throws Error{GridTooLarge} when it exceeds `cap`.
std::size_t checked_power(std::size_t base, std::size_t exponent, std::size_t cap);

/// D = M^(K-1): number of opponent profiles seen by one player.
std::size_t opponent_profile_count(std::size_t players, std::size_t arms);

/// Encoded profile of everyone except `player`, in [0, M^(K-1)).
std::size_t encode_opponents(const JointProfile& profile, std::size_t player, std::size_t arms);

/// Inverse of encode_opponents: the joint profile with `player` on `arm`.
JointProfile with_opponents(std::size_t opponents, std::size_t player, Arm arm, std::size_t players,
                            std::size_t arms);

/// Index of a joint profile in [0, M^K).
std::size_t encode_joint(const JointProfile& profile, std::size_t arms);
JointProfile decode_joint(std::size_t index, std::size_t players, std::size_t arms);

}  // namespace calband
