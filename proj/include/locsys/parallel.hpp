#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace locsys {

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(state, item) for every item in [0, n), items dealt round-robin to
/// `threads` workers each owning a copy of `init`. Returns the per-worker
/// states in worker order; the first exception thrown by any worker is
/// rethrown after all workers finish.
template <class State, class Body>
std::vector<State> parallel_items(std::size_t n, unsigned threads, const State& init, Body body) {
  threads = std::max(1u, std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::vector<State> states(threads, init);
  std::vector<std::exception_ptr> errors(threads);
  auto run = [&](unsigned w) {
    try {
      for (std::size_t i = w; i < n; i += threads) body(states[w], i);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (threads == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return states;
}

}  // namespace locsys
