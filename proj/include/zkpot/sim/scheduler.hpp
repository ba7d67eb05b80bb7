#pragma once

#include <functional>
#include <queue>

namespace zkpot::sim {

// Single simulation clock. Events fire in (time, sequence) order, so two runs
// with the same seed deliver every message in the same order.
class Scheduler {
public:
    using Event = std::function<void()>;

    void at(double delay_s, Event fn) {
        queue_.push(Item{now_ + delay_s, seq_++, std::move(fn)});
    }

    void run() {
        while (!queue_.empty()) {
            Item item = std::move(const_cast<Item&>(queue_.top()));
            queue_.pop();
            now_ = item.time;
            item.fn();
        }
    }

    double now() const { return now_; }
    void advance_to(double t) {
        if (t > now_) now_ = t;
    }

private:
    struct Item {
        double time;
        std::uint64_t seq;
        Event fn;
        bool operator>(const Item& o) const {
            if (time != o.time) return time > o.time;
            return seq > o.seq;
        }
    };
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue_;
    double now_ = 0;
    std::uint64_t seq_ = 0;
};

}  // namespace zkpot::sim
