#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace orbitsense {

// Finite word over {0,1}.
using Word = std::vector<std::uint8_t>;

inline std::string word_to_string(const Word& w) {
    std::string s;
    s.reserve(w.size());
    for (auto b : w) s.push_back(b ? '1' : '0');
    return s;
}

inline Word word_from_string(const std::string& s) {
    Word w;
    w.reserve(s.size());
    for (char c : s) w.push_back(c == '1' ? 1 : 0);
    return w;
}

inline Word word_prefix(const Word& w, std::size_t n) {
    return Word(w.begin(), w.begin() + std::min(n, w.size()));
}

} // namespace orbitsense
