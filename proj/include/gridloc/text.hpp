#pragma once

#include <string>
#include <string_view>

namespace gridloc {

/// Canonical key for region names: Unicode NFC normalization of UTF-8 input,
/// then leading/trailing whitespace trimmed. Throws Error on invalid UTF-8.
std::string normalize_name(std::string_view name);

}  // namespace gridloc
