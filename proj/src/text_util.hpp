#ifndef CORRIDORLAB_SRC_TEXT_UTIL_HPP_
#define CORRIDORLAB_SRC_TEXT_UTIL_HPP_

// Line handling shared by the text parsers.

#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace corridorlab::detail {

  inline std::string_view trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
      return {};
    }
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  // 1-based column of `part` inside `line`; part must be a view into line.
  inline std::size_t column_of(std::string_view line, std::string_view part) {
    return static_cast<std::size_t>(part.data() - line.data()) + 1;
  }

  // Calls f(lineno, raw, content) for each line whose content (with '#'
  // comments stripped and whitespace trimmed) is nonempty.
  template <typename F>
  void for_each_line(std::string_view text, F&& f) {
    std::size_t lineno = 0;
    std::size_t pos    = 0;
    while (pos <= text.size()) {
      auto end = text.find('\n', pos);
      if (end == std::string_view::npos) {
        end = text.size();
      }
      auto raw = text.substr(pos, end - pos);
      pos      = end + 1;
      ++lineno;
      auto hash = raw.find('#');
      auto line = trim(hash == std::string_view::npos ? raw
                                                      : raw.substr(0, hash));
      if (!line.empty()) {
        f(lineno, raw, line);
      }
      if (end == text.size()) {
        break;
      }
    }
  }

  inline std::string read_file(std::string const& path) {
    std::ifstream in(path);
    if (!in) {
      throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

}  // namespace corridorlab::detail

#endif  // CORRIDORLAB_SRC_TEXT_UTIL_HPP_
