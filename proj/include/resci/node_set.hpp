#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

namespace resci {

/// Upper bound on the number of variables a graph may hold.
inline constexpr int kMaxNodes = 64;

/// A set of node indices in [0, 64), stored as a bitmask.
class NodeSet {
public:
    class iterator {
    public:
        using iterator_category = std::forward_iterator_tag;
        using value_type = int;
        using difference_type = std::ptrdiff_t;
        using pointer = const int*;
        using reference = int;

        iterator() = default;
        explicit iterator(std::uint64_t rest) : rest_(rest) {}

        int operator*() const { return std::countr_zero(rest_); }
        iterator& operator++() {
            rest_ &= rest_ - 1;
            return *this;
        }
        iterator operator++(int) {
            auto tmp = *this;
            ++*this;
            return tmp;
        }
        bool operator==(const iterator&) const = default;

    private:
        std::uint64_t rest_ = 0;
    };

    constexpr NodeSet() = default;
    NodeSet(std::initializer_list<int> nodes) {
        for (int v : nodes) insert(v);
    }

    static constexpr NodeSet from_mask(std::uint64_t mask) {
        NodeSet s;
        s.bits_ = mask;
        return s;
    }

    /// The set {0, ..., d-1}.
    static constexpr NodeSet first(int d) {
        return from_mask(d >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << d) - 1);
    }

    static NodeSet from_vector(const std::vector<int>& nodes) {
        NodeSet s;
        for (int v : nodes) s.insert(v);
        return s;
    }

    constexpr std::uint64_t mask() const { return bits_; }
    constexpr bool contains(int v) const { return (bits_ >> v) & 1U; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr int size() const { return std::popcount(bits_); }

    void insert(int v) {
        check(v);
        bits_ |= std::uint64_t{1} << v;
    }
    void erase(int v) {
        check(v);
        bits_ &= ~(std::uint64_t{1} << v);
    }

    NodeSet with(int v) const {
        NodeSet s = *this;
        s.insert(v);
        return s;
    }
    NodeSet without(int v) const {
        NodeSet s = *this;
        s.erase(v);
        return s;
    }

    constexpr bool is_subset_of(NodeSet other) const { return (bits_ & ~other.bits_) == 0; }
    constexpr bool intersects(NodeSet other) const { return (bits_ & other.bits_) != 0; }

    friend constexpr NodeSet operator|(NodeSet a, NodeSet b) { return from_mask(a.bits_ | b.bits_); }
    friend constexpr NodeSet operator&(NodeSet a, NodeSet b) { return from_mask(a.bits_ & b.bits_); }
    friend constexpr NodeSet operator-(NodeSet a, NodeSet b) { return from_mask(a.bits_ & ~b.bits_); }
    NodeSet& operator|=(NodeSet o) {
        bits_ |= o.bits_;
        return *this;
    }
    NodeSet& operator&=(NodeSet o) {
        bits_ &= o.bits_;
        return *this;
    }
    NodeSet& operator-=(NodeSet o) {
        bits_ &= ~o.bits_;
        return *this;
    }

    friend constexpr bool operator==(NodeSet, NodeSet) = default;
    friend constexpr auto operator<=>(NodeSet a, NodeSet b) { return a.bits_ <=> b.bits_; }

    iterator begin() const { return iterator(bits_); }
    iterator end() const { return iterator(0); }

    /// Smallest element; the set must be nonempty.
    int front() const { return std::countr_zero(bits_); }

    std::vector<int> to_vector() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(size()));
        for (int v : *this) out.push_back(v);
        return out;
    }

    /// "{0,3,5}"
    std::string to_string() const {
        std::string s = "{";
        bool first_item = true;
        for (int v : *this) {
            if (!first_item) s += ',';
            s += std::to_string(v);
            first_item = false;
        }
        return s + "}";
    }

private:
    static void check(int v) {
        if (v < 0 || v >= kMaxNodes) throw std::out_of_range("node index out of range: " + std::to_string(v));
    }

    std::uint64_t bits_ = 0;
};

/// Calls fn(S) for every subset S of `pool` with exactly k elements, in
/// increasing order of the selected positions. Stops early if fn returns true.
/// Returns true iff fn stopped the iteration.
template <typename Fn>
bool for_each_subset_of_size(NodeSet pool, int k, Fn&& fn) {
    const std::vector<int> items = pool.to_vector();
    const int m = static_cast<int>(items.size());
    if (k < 0 || k > m) return false;
    if (k == 0) return fn(NodeSet{});
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) idx[static_cast<std::size_t>(t)] = t;
    while (true) {
        NodeSet s;
        for (int t : idx) s.insert(items[static_cast<std::size_t>(t)]);
        if (fn(s)) return true;
        int pos = k - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == m - k + pos) --pos;
        if (pos < 0) return false;
        ++idx[static_cast<std::size_t>(pos)];
        for (int t = pos + 1; t < k; ++t) idx[static_cast<std::size_t>(t)] = idx[static_cast<std::size_t>(t - 1)] + 1;
    }
}

}  // namespace resci
