#pragma once

#include <cstddef>
#include <optional>
#include <unordered_set>
#include <vector>

#include "cohsplit/boolean_group.hpp"

namespace cohsplit {

enum class FeedKind { steered, forced };

struct FeedReport {
  GroupElement element;
  Bit value = 0;
  FeedKind kind = FeedKind::forced;
  std::optional<Point> steering;  // set iff kind == steered

  friend bool operator==(const FeedReport&, const FeedReport&) = default;
};

// Online construction of a map f: X -> Z_2 whose extension sends a stream of
// distinct elements into two classes of nearly equal size.
//
// Each fed element with an unassigned point is steered: its greatest
// unassigned point x is chosen, the other unassigned points get 0, and f(x)
// puts the element in the currently smaller class (class 0 on a tie). Every
// steered element lands in a minority class, which gives
// min(count0, count1) >= steered / 2 after every feed.
class SplitterState {
 public:
  // Throws EmptyElement or DuplicateElement.
  FeedReport feed(const GroupElement& a);

  // The partial map with default 0.
  TwoValuedMap finalize() const;

  const TwoValuedMap& partial() const noexcept { return partial_; }
  std::size_t count0() const noexcept { return count0_; }
  std::size_t count1() const noexcept { return count1_; }
  std::size_t steered() const noexcept { return steered_; }
  std::size_t total() const noexcept { return count0_ + count1_; }
  const std::vector<FeedReport>& log() const noexcept { return log_; }

 private:
  TwoValuedMap partial_;
  std::size_t count0_ = 0;
  std::size_t count1_ = 0;
  std::size_t steered_ = 0;
  std::vector<FeedReport> log_;
  std::unordered_set<GroupElement, GroupElementHash> seen_;
};

}  // namespace cohsplit
