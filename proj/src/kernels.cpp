#include "liftlim/kernels.hpp"

#include <exception>

#include "stage_ops.hpp"

namespace liftlim {

namespace {

/// out[i] = f(i) for i < n, in parallel; rethrows the lowest-index failure.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& f) {
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      slots[i] = f(static_cast<std::size_t>(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

template <class T, class F>
std::vector<T> serial_map(std::size_t n, F&& f) {
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(f(i));
  return out;
}

}  // namespace

std::vector<bool> batch_member(const StageGroup& g, const Subgroup& h, const std::vector<Word>& words) {
  const auto r = parallel_map<char>(words.size(), [&](std::size_t i) -> char { return detail::member(g, h, words[i]); });
  return {r.begin(), r.end()};
}

std::vector<bool> batch_member_serial(const StageGroup& g, const Subgroup& h, const std::vector<Word>& words) {
  const auto r = serial_map<char>(words.size(), [&](std::size_t i) -> char { return detail::member(g, h, words[i]); });
  return {r.begin(), r.end()};
}

std::vector<Pi1Result> batch_pi1(const Tower& t, const BaseModel& m, const std::vector<Word>& words,
                                 std::size_t horizon) {
  // fill the shared tail cache first so workers only read it
  for (std::size_t i = 0; i < t.stages_up_to(horizon); ++i) t.thread(i);
  return parallel_map<Pi1Result>(words.size(), [&](std::size_t i) { return pi1_membership(t, m, words[i], horizon); });
}

std::vector<Pi1Result> batch_pi1_serial(const Tower& t, const BaseModel& m, const std::vector<Word>& words,
                                        std::size_t horizon) {
  return serial_map<Pi1Result>(words.size(), [&](std::size_t i) { return pi1_membership(t, m, words[i], horizon); });
}

std::vector<std::optional<Integer>> stage_indices(const Tower& t, std::size_t horizon) {
  const std::size_t n = t.stages_up_to(horizon);
  for (std::size_t i = 0; i < n; ++i) t.thread(i);
  return parallel_map<std::optional<Integer>>(n, [&](std::size_t i) { return detail::index(t.group(i), t.thread(i)); });
}

std::vector<std::optional<Integer>> stage_indices_serial(const Tower& t, std::size_t horizon) {
  return serial_map<std::optional<Integer>>(t.stages_up_to(horizon),
                                            [&](std::size_t i) { return detail::index(t.group(i), t.thread(i)); });
}

}  // namespace liftlim
