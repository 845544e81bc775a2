#include "resci/inference/interval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace resci::inference {

namespace {
void check(const Interval& iv) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) throw std::invalid_argument("interval endpoints must be finite");
    if (iv.lo > iv.hi) throw std::invalid_argument("interval has lo > hi");
}
}  // namespace

IntervalUnion::IntervalUnion(std::vector<Interval> intervals) : parts_(std::move(intervals)) {
    for (const auto& iv : parts_) check(iv);
    normalize();
}

void IntervalUnion::add(Interval interval) {
    check(interval);
    parts_.push_back(interval);
    normalize();
}

void IntervalUnion::add(const IntervalUnion& other) {
    parts_.insert(parts_.end(), other.parts_.begin(), other.parts_.end());
    normalize();
}

void IntervalUnion::normalize() {
    std::sort(parts_.begin(), parts_.end(), [](const Interval& a, const Interval& b) {
        return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    std::vector<Interval> merged;
    for (const auto& iv : parts_) {
        if (!merged.empty() && iv.lo <= merged.back().hi) {
            merged.back().hi = std::max(merged.back().hi, iv.hi);
        } else {
            merged.push_back(iv);
        }
    }
    parts_ = std::move(merged);
}

std::optional<Interval> IntervalUnion::hull() const {
    if (parts_.empty()) return std::nullopt;
    return Interval{parts_.front().lo, parts_.back().hi};
}

double IntervalUnion::total_length() const {
    double sum = 0.0;
    for (const auto& iv : parts_) sum += iv.length();
    return sum;
}

double IntervalUnion::hull_length() const { return parts_.empty() ? 0.0 : parts_.back().hi - parts_.front().lo; }

bool IntervalUnion::contains(double x) const {
    auto it = std::upper_bound(parts_.begin(), parts_.end(), x, [](double v, const Interval& iv) { return v < iv.lo; });
    if (it == parts_.begin()) return false;
    return std::prev(it)->contains(x);
}

}  // namespace resci::inference
