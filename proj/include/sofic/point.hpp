#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sofic {

/// A point of a set acted upon, in the canonical byte encoding chosen by the
/// set's codec. Equality of points is byte equality.
struct Point {
  std::string bytes;

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

/// A countable set with a point codec.
class PointSpace {
 public:
  virtual ~PointSpace() = default;
  virtual std::string describe() const = 0;
  virtual std::string format_point(const Point& p) const = 0;
  /// All points when the set is finite.
  virtual std::optional<std::vector<Point>> finite_points() const { return std::nullopt; }
};

/// Label set {0..n-1}, used for the finite sets B of orbit witnesses.
class LabelSpace final : public PointSpace {
 public:
  explicit LabelSpace(std::uint32_t size) : size_(size) {}
  std::string describe() const override;
  std::string format_point(const Point& p) const override;
  std::optional<std::vector<Point>> finite_points() const override;
  std::uint32_t size() const { return size_; }

 private:
  std::uint32_t size_;
};

Point label_point(std::uint32_t label);
std::uint32_t point_label(const Point& p);

}  // namespace sofic
