/*
   Copyright 2026 The conic-fibres Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace conic {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using u32 = std::uint32_t;
using i128 = __int128;
using u128 = unsigned __int128;

// ---------------------------------------------------------------------------
// Errors

/// Input outside the mathematical domain of an operation (e.g. theta_q(0)).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Checked 128-bit arithmetic overflowed.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// Malformed instance configuration; carries the location when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0,
             std::size_t column = 0)
      : std::runtime_error(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed input that violates an Instance/Form invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A requested enumeration would exceed the operation budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::string_view what, double estimated_ops, double max_ops);
  double estimated_ops() const { return estimated_ops_; }

 private:
  double estimated_ops_;
};

/// Upper limit on elementary work (points enumerated, terms summed).
struct Budget {
  double max_ops = 2.0e11;

  void require(double ops, std::string_view what) const {
    if (ops > max_ops) throw BudgetExceeded(what, ops, max_ops);
  }
};

// ---------------------------------------------------------------------------
// 128-bit helpers

std::string to_string(i128 v);
std::string to_string(u128 v);
i128 parse_i128(std::string_view text);

inline i128 checked_add(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r)) throw RangeError("128-bit overflow in addition");
  return r;
}

inline i128 checked_mul(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw RangeError("128-bit overflow in multiplication");
  return r;
}

inline u128 abs_u128(i128 v) {
  return v < 0 ? u128(0) - u128(v) : u128(v);
}

// ---------------------------------------------------------------------------
// Worker pool

/// Process-wide worker count used by the parallel kernels (>= 1).
unsigned worker_threads();
void set_worker_threads(unsigned n);

/// Runs fn(i) for i in [0, tasks) on the worker pool and returns the results
/// in task order, so any fold over them is schedule independent.
template <class R, class F>
std::vector<R> parallel_map(std::size_t tasks, F&& fn) {
  std::vector<R> out(tasks);
  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(worker_threads(), tasks));
  if (threads <= 1) {
    for (std::size_t i = 0; i < tasks; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks) return;
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(tasks);
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace conic
