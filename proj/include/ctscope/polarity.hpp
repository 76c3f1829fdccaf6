#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace ctscope {

enum class Polarity { kPositive = 0, kNeutral = 1, kNegative = 2 };

inline constexpr std::array<Polarity, 3> kPolarities = {Polarity::kPositive, Polarity::kNeutral, Polarity::kNegative};

inline std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::kPositive: return "positive";
    case Polarity::kNeutral: return "neutral";
    case Polarity::kNegative: return "negative";
  }
  return "neutral";
}

inline std::optional<Polarity> parse_polarity(std::string_view s) {
  if (s == "positive" || s == "pos") return Polarity::kPositive;
  if (s == "neutral" || s == "neu") return Polarity::kNeutral;
  if (s == "negative" || s == "neg") return Polarity::kNegative;
  return std::nullopt;
}

}  // namespace ctscope
