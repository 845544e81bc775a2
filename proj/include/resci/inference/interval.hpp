#pragma once

#include <optional>
#include <vector>

namespace resci::inference {

/// Closed interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double x) const { return lo <= x && x <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of closed intervals kept as sorted, pairwise disjoint
/// components. Overlapping or touching inputs are merged.
class IntervalUnion {
public:
    IntervalUnion() = default;
    /// Throws std::invalid_argument on lo > hi or non-finite endpoints.
    explicit IntervalUnion(std::vector<Interval> intervals);

    void add(Interval interval);
    void add(const IntervalUnion& other);

    const std::vector<Interval>& components() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    std::optional<Interval> hull() const;
    /// Sum of component lengths (Lebesgue measure of the union).
    double total_length() const;
    double hull_length() const;
    bool contains(double x) const;

    friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;

private:
    void normalize();

    std::vector<Interval> parts_;
};

}  // namespace resci::inference
