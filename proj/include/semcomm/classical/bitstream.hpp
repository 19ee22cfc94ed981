// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace semcomm::classical {

// One entry per bit (0 or 1); the vector length is the exact bit count.
using BitStream = std::vector<std::uint8_t>;

}  // namespace semcomm::classical
