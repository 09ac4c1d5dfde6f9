// Small shared utilities: result type, hashing, number<->text helpers.
#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tacc {

// Value-or-error carrier used across parsing, interpretation and retargeting.
template <typename T>
struct Result {
  std::optional<T> val;
  std::string err;

  bool ok() const { return val.has_value(); }
  T& operator*() { return *val; }
  const T& operator*() const { return *val; }
  T* operator->() { return &*val; }
  const T* operator->() const { return &*val; }

  static Result success(T v) { return Result{std::move(v), {}}; }
  static Result failure(std::string e) { return Result{std::nullopt, std::move(e)}; }
};

inline uint64_t fnv1a_init() { return 1469598103934665603ULL; }

inline uint64_t fnv1a_bytes(uint64_t h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string to_hex(uint64_t v);

// Shortest decimal form that round-trips the exact binary64 value.
std::string double_to_text(double d);
std::optional<double> double_from_text(std::string_view s);

std::string int_to_text(int64_t v);
std::optional<int64_t> int_from_text(std::string_view s);

}  // namespace tacc
