#pragma once

// String-keyed example parameters ("E=3", "lengths=1:1.2") with typed access.

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qghot/error.hpp"

namespace qghot {

class Params {
 public:
  Params() = default;
  Params(std::initializer_list<std::pair<const std::string, std::string>> init) : values_(init) {}

  /// Parses "a=1,b=2:3" (comma separated, list items colon separated).
  static Params parse(const std::string& text) {
    Params p;
    p.merge(text);
    return p;
  }

  void merge(const std::string& text) {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) fail(ErrorCode::BadParameter, "parameter '" + item + "' is not key=value");
      values_[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  double number(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : to_number(key, it->second);
  }

  long integer(const std::string& key, long fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    double v = to_number(key, it->second);
    if (v != std::floor(v)) fail(ErrorCode::BadParameter, "parameter '" + key + "' must be an integer");
    return static_cast<long>(v);
  }

  std::vector<double> list(const std::string& key, const std::vector<double>& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ':')) out.push_back(to_number(key, item));
    if (out.empty()) fail(ErrorCode::BadParameter, "parameter '" + key + "' is an empty list");
    return out;
  }

  /// Fails on keys outside the allowed set (typos must not pass silently).
  void restrict_to(const std::vector<std::string>& allowed, const std::string& context) const {
    for (const auto& [key, value] : values_) {
      bool ok = false;
      for (const auto& a : allowed) ok = ok || a == key;
      if (!ok) fail(ErrorCode::BadParameter, "unknown parameter '" + key + "' for " + context);
    }
  }

 private:
  static double to_number(const std::string& key, const std::string& text) {
    // "pi", "2pi", "0.5pi" are accepted as multiples of pi.
    if (text.size() >= 2 && text.compare(text.size() - 2, 2, "pi") == 0) {
      std::string head = text.substr(0, text.size() - 2);
      return (head.empty() ? 1.0 : to_number(key, head)) * M_PI;
    }
    try {
      std::size_t used = 0;
      double v = std::stod(text, &used);
      if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
      return v;
    } catch (const std::exception&) {
      fail(ErrorCode::BadParameter, "parameter '" + key + "' has non-numeric value '" + text + "'");
    }
  }

  std::map<std::string, std::string> values_;
};

}  // namespace qghot
