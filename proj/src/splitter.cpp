#include "cohsplit/splitter.hpp"

namespace cohsplit {

FeedReport SplitterState::feed(const GroupElement& a) {
  if (a.empty()) throw EmptyElement();
  if (!seen_.insert(a).second) throw DuplicateElement(to_string(a));

  FeedReport report{a, 0, FeedKind::forced, std::nullopt};
  const Point* steer = nullptr;
  for (auto it = a.points().rbegin(); it != a.points().rend(); ++it) {
    if (!partial_.is_assigned(*it)) {
      steer = &*it;
      break;
    }
  }

  if (steer == nullptr) {
    report.value = hom_eval(partial_, a);
  } else {
    Bit rest = 0;
    for (const Point& x : a) {
      if (&x == steer) continue;
      if (!partial_.is_assigned(x)) partial_.assign(x, 0);
      rest ^= partial_(x);
    }
    const Bit target = count0_ <= count1_ ? 0 : 1;
    partial_.assign(*steer, target ^ rest);
    report.value = target;
    report.kind = FeedKind::steered;
    report.steering = *steer;
    ++steered_;
  }

  (report.value ? count1_ : count0_) += 1;
  log_.push_back(report);
  return report;
}

TwoValuedMap SplitterState::finalize() const {
  TwoValuedMap f = partial_;
  f.set_default(0);
  return f;
}

}  // namespace cohsplit
