#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ctscope::text {

/// Replaces @-mentions with "user" and http(s) links with "http", collapses
/// whitespace runs and trims. Idempotent. Word characters are ASCII [A-Za-z0-9_].
std::string normalize(std::string_view text);

/// Splits on non-alphanumeric ASCII boundaries and lowercases. Tokens shorter
/// than two characters are dropped unless they are digits. Bytes >= 0x80 act
/// as separators.
std::vector<std::string> tokenize(std::string_view text);

std::string join(const std::vector<std::string>& tokens, std::string_view sep = " ");

}  // namespace ctscope::text
