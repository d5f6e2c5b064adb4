#ifndef BELLKIT_IO_HPP
#define BELLKIT_IO_HPP

#include "bellkit/types.hpp"

#include <cctype>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace bellkit {

namespace detail {
inline std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stod(s, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == s.size();
}
}  // namespace detail

/// Parse an angle literal: a rational multiple of pi ("pi", "-pi/2", "3pi/4",
/// "2*pi", "0.5pi/3") or a plain decimal in radians ("0.25", "1e-3").
inline double parse_angle(const std::string& text) {
  std::string s = detail::trimmed(text);
  if (s.empty()) throw parse_error("parse_angle: empty angle literal");

  double sign = 1.0;
  if (s[0] == '+' || s[0] == '-') {
    if (s[0] == '-') sign = -1.0;
    s = detail::trimmed(s.substr(1));
  }

  std::size_t pi_pos = s.find("pi");
  if (pi_pos == std::string::npos) {
    double v;
    if (!detail::parse_number(s, v))
      throw parse_error("parse_angle: cannot parse '" + text + "'");
    return sign * v;
  }

  std::string head = detail::trimmed(s.substr(0, pi_pos));
  std::string tail = detail::trimmed(s.substr(pi_pos + 2));
  if (!head.empty() && head.back() == '*') head = detail::trimmed(head.substr(0, head.size() - 1));

  double num = 1.0;
  if (!head.empty() && !detail::parse_number(head, num))
    throw parse_error("parse_angle: cannot parse '" + text + "'");

  double den = 1.0;
  if (!tail.empty()) {
    if (tail[0] != '/')
      throw parse_error("parse_angle: cannot parse '" + text + "'");
    std::string d = detail::trimmed(tail.substr(1));
    if (!detail::parse_number(d, den) || den == 0.0)
      throw parse_error("parse_angle: cannot parse '" + text + "'");
  }
  return sign * num * kPi / den;
}

/// Flat key = value configuration (TOML-compatible subset: '#' comments,
/// no sections, optional double quotes around values).
inline std::map<std::string, std::string> parse_config(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trimmed(line);
    if (line.empty()) continue;
    if (line[0] == '[')
      throw parse_error("config line " + std::to_string(lineno) +
                        ": sections are not supported (flat key = value only)");
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw parse_error("config line " + std::to_string(lineno) +
                        ": expected key = value");
    std::string key = detail::trimmed(line.substr(0, eq));
    std::string value = detail::trimmed(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (key.empty() || value.empty())
      throw parse_error("config line " + std::to_string(lineno) +
                        ": expected key = value");
    out[key] = value;
  }
  return out;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(detail::trimmed(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace bellkit

#endif  // BELLKIT_IO_HPP
