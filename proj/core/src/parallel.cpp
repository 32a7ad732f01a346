#include "contestopt/parallel.hpp"

namespace contestopt {

namespace {
std::atomic<int> g_max_threads{0};  // 0 = hardware concurrency
}

int max_threads() {
    const int v = g_max_threads.load();
    if (v > 0) return v;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

void set_max_threads(int n) { g_max_threads.store(n); }

}  // namespace contestopt
