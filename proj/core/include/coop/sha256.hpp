#pragma once

#include <string>
#include <string_view>

namespace coop {

/// SHA-256 of `data`, returned as 64 lowercase hex characters.
std::string sha256_hex(std::string_view data);

}  // namespace coop
