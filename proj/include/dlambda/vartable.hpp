#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dlambda {

inline constexpr std::size_t kMaxVariables = 32;

/// Ordered list of variable names. Coordinates come first and may be
/// differentiated; parameters follow and only ever enter coefficients and
/// exponents. The position of a name is its index in every exponent vector.
class VarTable {
 public:
  VarTable(std::vector<std::string> coordinates, std::vector<std::string> parameters);

  static std::shared_ptr<const VarTable> make(std::vector<std::string> coordinates,
                                              std::vector<std::string> parameters = {});

  std::size_t size() const noexcept { return names_.size(); }
  std::size_t coordinate_count() const noexcept { return coordinate_count_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  bool is_parameter(std::size_t i) const noexcept { return i >= coordinate_count_; }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws UnknownVariable.
  std::size_t index(std::string_view name) const;

  bool operator==(const VarTable& other) const noexcept {
    return names_ == other.names_ && coordinate_count_ == other.coordinate_count_;
  }

 private:
  std::vector<std::string> names_;
  std::size_t coordinate_count_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

using VarTablePtr = std::shared_ptr<const VarTable>;

/// True when both tables are absent, identical, or equal by content.
inline bool compatible(const VarTablePtr& a, const VarTablePtr& b) {
  return !a || !b || a == b || *a == *b;
}

}  // namespace dlambda
