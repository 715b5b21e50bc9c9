#include "calband/profile.hpp"

#include <string>

#include "calband/error.hpp"

namespace calband {

std::size_t checked_power(std::size_t base, std::size_t exponent, std::size_t cap) {
    std::size_t value = 1;
    for (std::size_t i = 0; i < exponent; ++i) {
        if (base != 0 && value > cap / base) {
            throw Error(ErrorCode::GridTooLarge, std::to_string(base) + "^" + std::to_string(exponent) +
                                                     " exceeds cap " + std::to_string(cap));
        }
        value *= base;
    }
    if (value > cap) throw Error(ErrorCode::GridTooLarge, "profile count exceeds cap " + std::to_string(cap));
    return value;
}

std::size_t opponent_profile_count(std::size_t players, std::size_t arms) {
    return checked_power(arms, players == 0 ? 0 : players - 1, SIZE_MAX);
}

std::size_t encode_opponents(const JointProfile& profile, std::size_t player, std::size_t arms) {
    std::size_t d = 0;
    for (std::size_t j = 0; j < profile.size(); ++j) {
        if (j == player) continue;
        d = d * arms + profile[j];
    }
    return d;
}

JointProfile with_opponents(std::size_t opponents, std::size_t player, Arm arm, std::size_t players,
                            std::size_t arms) {
    JointProfile profile(players, 0);
    for (std::size_t j = players; j-- > 0;) {
        if (j == player) continue;
        profile[j] = opponents % arms;
        opponents /= arms;
    }
    profile[player] = arm;
    return profile;
}

std::size_t encode_joint(const JointProfile& profile, std::size_t arms) {
    std::size_t index = 0;
    for (Arm a : profile) index = index * arms + a;
    return index;
}

JointProfile decode_joint(std::size_t index, std::size_t players, std::size_t arms) {
    JointProfile profile(players, 0);
    for (std::size_t j = players; j-- > 0;) {
        profile[j] = index % arms;
        index /= arms;
    }
    return profile;
}

}  // namespace calband
