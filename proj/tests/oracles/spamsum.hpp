#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace oracle {

// Straight port of the original spamsum routine: guess a block size, hash,
// halve and start over while the first digest is too short.
std::string spamsum(const std::vector<std::uint8_t>& in);

}  // namespace oracle
