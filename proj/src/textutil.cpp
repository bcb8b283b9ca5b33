#include "fieldsim/textutil.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

namespace fieldsim::text {

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string normalize(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool in_space = true;
  for (char raw : s) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isspace(c)) {
      if (!in_space) out.push_back(' ');
      in_space = true;
    } else {
      out.push_back(static_cast<char>(std::tolower(c)));
      in_space = false;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return true;
  const std::string h = to_lower(haystack);
  const std::string n = to_lower(needle);
  return h.find(n) != std::string::npos;
}

std::vector<std::string> split_lines(std::string_view s) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find('\n', start);
    if (end == std::string_view::npos) {
      lines.emplace_back(s.substr(start));
      break;
    }
    lines.emplace_back(s.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::string substitute(std::string tmpl, std::string_view token, std::string_view value) {
  std::size_t pos = 0;
  while ((pos = tmpl.find(token, pos)) != std::string::npos) {
    tmpl.replace(pos, token.size(), value);
    pos += value.size();
  }
  return tmpl;
}

bool contains_digit(std::string_view s) {
  return std::any_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

bool mentions_quantity(std::string_view s) {
  if (contains_digit(s)) return true;
  static const std::array<const char*, 33> kNumberWords = {
      "zero",    "one",     "two",     "three",   "four",    "five",    "six",
      "seven",   "eight",   "nine",    "ten",     "eleven",  "twelve",  "thirteen",
      "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen", "twenty",
      "thirty",  "forty",   "fifty",   "sixty",   "seventy", "eighty",  "ninety",
      "hundred", "thousand", "million", "percent", "percentage"};
  const std::string lowered = " " + to_lower(s) + " ";
  for (const char* word : kNumberWords) {
    std::size_t pos = lowered.find(word);
    while (pos != std::string::npos) {
      const auto before = static_cast<unsigned char>(lowered[pos - 1]);
      const auto after = static_cast<unsigned char>(lowered[pos + std::string_view(word).size()]);
      if (!std::isalpha(before) && !std::isalpha(after)) return true;
      pos = lowered.find(word, pos + 1);
    }
  }
  return false;
}

}  // namespace fieldsim::text
