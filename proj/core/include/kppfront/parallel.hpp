#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace kppfront {

/// Default worker count: the hardware concurrency, at least 1.
inline int default_workers() { return std::max(1, static_cast<int>(std::thread::hardware_concurrency())); }

/// Applies fn to every item on up to `workers` threads; results keep input order.
/// The exception of the lowest failing index is rethrown after all workers stop.
template <class T, class Fn>
auto parallel_map(const std::vector<T>& items, Fn fn, int workers = 0)
    -> std::vector<std::invoke_result_t<Fn&, const T&>> {
  using R = std::invoke_result_t<Fn&, const T&>;
  const std::size_t n = items.size();
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        slots[k].emplace(fn(items[k]));
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t count =
      std::min<std::size_t>(n, static_cast<std::size_t>(workers > 0 ? workers : default_workers()));
  if (count <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < count; ++w) pool.emplace_back(work);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace kppfront
