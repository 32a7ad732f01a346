#pragma once

#include <atomic>
#include <thread>
#include <vector>

namespace contestopt {

// Process-wide worker cap (CLI --threads). Results never depend on it:
// work is split into indexed slots and reduced in slot order.
int max_threads();
void set_max_threads(int n);

template <class F>
void parallel_slots(long slots, F&& body) {
    const long T = std::min<long>(max_threads(), slots);
    if (T <= 1) {
        for (long i = 0; i < slots; ++i) body(i);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> workers;
    workers.reserve(T);
    for (long t = 0; t < T; ++t)
        workers.emplace_back([&next, slots, &body] {
            for (long i; (i = next.fetch_add(1)) < slots;) body(i);
        });
    for (auto& w : workers) w.join();
}

}  // namespace contestopt
