#include "ctscope/text.hpp"

namespace ctscope::text {

namespace {

bool is_word(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

bool is_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool starts_with_ci(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (s.size() - pos < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char c = s[pos + i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != prefix[i]) return false;
  }
  return true;
}

}  // namespace

std::string normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  auto emit = [&](std::string_view piece) {
    if (pending_space && !out.empty()) out += ' ';
    pending_space = false;
    out += piece;
  };

  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (is_space(c)) {
      pending_space = true;
      ++i;
      continue;
    }
    if (c == 'h' || c == 'H') {
      if (starts_with_ci(text, i, "http://") || starts_with_ci(text, i, "https://")) {
        while (i < text.size() && !is_space(text[i])) ++i;
        emit("http");
        continue;
      }
    }
    if (c == '@') {
      // A run of '@' followed by a word character is one mention, so that
      // "@@name" cannot leave a stray '@' in front of the replacement.
      std::size_t j = i;
      while (j < text.size() && text[j] == '@') ++j;
      if (j < text.size() && is_word(text[j])) {
        while (j < text.size() && is_word(text[j])) ++j;
        i = j;
        emit("user");
        continue;
      }
      emit(text.substr(i, j - i));
      i = j;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j]) && text[j] != '@' && text[j] != 'h' &&
           text[j] != 'H') {
      ++j;
    }
    if (j == i) j = i + 1;
    emit(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !is_alnum(text[i])) ++i;
    std::size_t start = i;
    bool digits = true;
    while (i < text.size() && is_alnum(text[i])) {
      if (text[i] < '0' || text[i] > '9') digits = false;
      ++i;
    }
    std::size_t len = i - start;
    if (len == 0) break;
    if (len >= 2 || digits) {
      std::string tok(text.substr(start, len));
      for (auto& ch : tok) {
        if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
      }
      tokens.push_back(std::move(tok));
    }
  }
  return tokens;
}

std::string join(const std::vector<std::string>& tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

}  // namespace ctscope::text
