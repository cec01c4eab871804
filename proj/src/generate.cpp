#include "cohsplit/generate.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "cohsplit/errors.hpp"

namespace cohsplit {

StreamKind stream_kind_from_string(const std::string& s) {
  if (s == "star-free") return StreamKind::star_free;
  if (s == "star-rich") return StreamKind::star_rich;
  if (s == "mixed") return StreamKind::mixed;
  if (s == "bucketed") return StreamKind::bucketed;
  throw ParseError("unknown stream kind " + s);
}

std::string to_string(StreamKind kind) {
  switch (kind) {
    case StreamKind::star_free:
      return "star-free";
    case StreamKind::star_rich:
      return "star-rich";
    case StreamKind::mixed:
      return "mixed";
    case StreamKind::bucketed:
      return "bucketed";
  }
  return "star-free";
}

std::string ultrafilter_name(std::size_t i) { return "p" + std::to_string(i); }
std::string generator_name(std::size_t i) { return "k" + std::to_string(i); }

namespace {

class Builder {
 public:
  Builder(std::uint64_t seed, const GenerateOptions& o) : rng_(seed), o_(o) {
    if (o.ultrafilters == 0 || o.generators == 0 || o.pool == 0 || o.max_points == 0) {
      throw std::invalid_argument("generator options must be positive");
    }
    std::vector<std::size_t> order(o.ultrafilters * o.generators);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng_);
    for (std::size_t t : order) stars_.push_back(star(t));
  }

  Point pool_point(std::size_t t) const {
    const std::size_t u = o_.ultrafilters, g = o_.generators;
    return Point{ultrafilter_name(t % u), generator_name((t / u) % g), ExtNat(t / (u * g))};
  }

  Point star(std::size_t t) const {
    return Point{ultrafilter_name(t % o_.ultrafilters),
                 generator_name((t / o_.ultrafilters) % o_.generators), ExtNat::omega()};
  }

  std::size_t uniform(std::size_t lo, std::size_t hi) {  // inclusive
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }

  std::vector<Point> pool_points(std::size_t lo, std::size_t hi) {
    const std::size_t count = std::min(uniform(lo, hi), o_.pool);
    std::set<std::size_t> picked;
    while (picked.size() < count) picked.insert(uniform(0, o_.pool - 1));
    std::vector<Point> out;
    for (std::size_t t : picked) out.push_back(pool_point(t));
    return out;
  }

  // The m-th star-rich element's star point.
  Point star_for(std::size_t m) {
    if (m < stars_.size()) return stars_[m];
    return stars_[uniform(0, stars_.size() - 1)];
  }

  std::mt19937_64& rng() { return rng_; }
  const GenerateOptions& options() const { return o_; }

 private:
  std::mt19937_64 rng_;
  GenerateOptions o_;
  std::vector<Point> stars_;
};

}  // namespace

std::vector<GroupElement> generate_stream(StreamKind kind, std::size_t size, std::uint64_t seed,
                                          const GenerateOptions& options) {
  Builder b(seed, options);
  const std::size_t k = options.max_points;
  const std::size_t stars = options.ultrafilters * options.generators;
  const std::vector<GroupElement> traces = {
      GroupElement({b.star(0)}),
      GroupElement({b.star(1 % stars)}),
      GroupElement({b.star(0), b.star(stars - 1)}),
  };

  std::set<GroupElement> seen;
  std::vector<GroupElement> out;
  out.reserve(size);
  std::size_t star_rich_count = 0;
  std::size_t attempts = 0;
  while (out.size() < size) {
    if (++attempts > 100 * size + 1000) {
      throw std::runtime_error("cannot draw enough distinct elements from the pool");
    }
    std::vector<Point> points;
    bool uses_star = false;
    switch (kind) {
      case StreamKind::star_free:
        points = b.pool_points(1, k);
        break;
      case StreamKind::star_rich:
        uses_star = true;
        break;
      case StreamKind::mixed:
        uses_star = b.uniform(0, 1) == 1;
        if (!uses_star) points = b.pool_points(1, k);
        break;
      case StreamKind::bucketed: {
        const std::size_t roll = b.uniform(0, 99);
        const auto& trace = traces[roll < 70 ? 0 : roll < 85 ? 1 : 2];
        points = b.pool_points(1, k);
        points.insert(points.end(), trace.begin(), trace.end());
        break;
      }
    }
    if (uses_star) {
      points = b.pool_points(0, k - 1);
      points.push_back(b.star_for(star_rich_count));
    }
    GroupElement a(std::move(points));
    if (!seen.insert(a).second) continue;
    if (uses_star) ++star_rich_count;
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace cohsplit
