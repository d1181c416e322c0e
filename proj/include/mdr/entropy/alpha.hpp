#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "mdr/core/types.hpp"

namespace mdr {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Renyi order in [1/2, inf]. The endpoints 1/2 and inf and the centre 1
/// are symbolic: they always dispatch to their closed forms.
class AlphaOrder {
 public:
  enum class Kind { Half, One, Infinity, Finite };

  explicit AlphaOrder(double value) : value_(value) {
    if (std::isnan(value) || value < 0.5) throw Error("alpha must lie in [1/2, inf], got " + std::to_string(value));
    if (value == 0.5)
      kind_ = Kind::Half;
    else if (value == 1.0)
      kind_ = Kind::One;
    else if (std::isinf(value))
      kind_ = Kind::Infinity;
    else
      kind_ = Kind::Finite;
  }

  static AlphaOrder half() { return AlphaOrder(0.5); }
  static AlphaOrder one() { return AlphaOrder(1.0); }
  static AlphaOrder infinity() { return AlphaOrder(kInf); }

  [[nodiscard]] double value() const noexcept { return value_; }
  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] bool is_half() const noexcept { return kind_ == Kind::Half; }
  [[nodiscard]] bool is_one() const noexcept { return kind_ == Kind::One; }
  [[nodiscard]] bool is_infinity() const noexcept { return kind_ == Kind::Infinity; }

  [[nodiscard]] std::string to_string() const {
    if (is_infinity()) return "inf";
    std::ostringstream os;
    os << value_;
    return os.str();
  }

  friend bool operator==(const AlphaOrder& a, const AlphaOrder& b) { return a.value_ == b.value_; }

 private:
  double value_;
  Kind kind_;
};

/// Parses "inf", "infinity", "0.5", "2", ...
inline AlphaOrder parse_alpha(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return AlphaOrder::infinity();
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw Error("cannot parse alpha '" + text + "'");
  }
  if (pos != text.size()) throw Error("cannot parse alpha '" + text + "'");
  return AlphaOrder(v);
}

/// Comma-separated list.
inline std::vector<AlphaOrder> parse_alpha_list(const std::string& text) {
  std::vector<AlphaOrder> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_alpha(item));
  }
  if (out.empty()) throw Error("empty alpha list");
  return out;
}

/// The order grid used by every fuzz campaign.
inline std::vector<AlphaOrder> fuzz_alpha_grid() {
  return {AlphaOrder::half(), AlphaOrder(0.75), AlphaOrder::one(), AlphaOrder(2.0), AlphaOrder::infinity()};
}

}  // namespace mdr
