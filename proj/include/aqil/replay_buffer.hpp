#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "aqil/env.hpp"
#include "aqil/random.hpp"

namespace aqil {

/// One (s, a, r, s', terminal) experience tuple.
struct Transition {
    CartState state;
    Action action = Action::PushLeft;
    double reward = 0.0;
    CartState next_state;
    bool terminal = false;
};

/// Bounded FIFO of transitions with uniform sampling (with replacement).
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
        if (capacity == 0) throw std::invalid_argument("replay buffer capacity must be positive");
        items_.reserve(capacity < 4096 ? capacity : 4096);
    }

    void push(const Transition& t) {
        if (items_.size() < capacity_) {
            items_.push_back(t);
        } else {
            items_[head_] = t;
            head_ = (head_ + 1) % capacity_;
        }
    }

    std::size_t size() const { return items_.size(); }
    std::size_t capacity() const { return capacity_; }

    /// i-th oldest stored transition.
    const Transition& operator[](std::size_t i) const { return items_.at((head_ + i) % items_.size()); }

    template <FullRangeGenerator G>
    std::vector<Transition> sample(std::size_t n, G& gen) const {
        if (n == 0 || items_.size() < n) throw std::logic_error("replay buffer: not enough transitions to sample");
        std::vector<Transition> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.push_back(items_[uniform_index(gen, items_.size())]);
        return out;
    }

private:
    std::size_t capacity_;
    std::size_t head_ = 0;  // oldest element once full
    std::vector<Transition> items_;
};

}  // namespace aqil
