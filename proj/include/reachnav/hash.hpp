#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace reachnav {

// 64-bit FNV-1a, used for content keys and provenance headers.
class Fnv1a {
 public:
  Fnv1a& bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= p[i];
      h_ *= 0x100000001b3ull;
    }
    return *this;
  }
  template <class T>
    requires std::is_trivially_copyable_v<T>
  Fnv1a& add(const T& v) {
    return bytes(&v, sizeof v);
  }
  Fnv1a& add(std::string_view s) {
    add(static_cast<std::uint64_t>(s.size()));
    return bytes(s.data(), s.size());
  }
  Fnv1a& add(const std::vector<std::uint8_t>& v) {
    add(static_cast<std::uint64_t>(v.size()));
    return bytes(v.data(), v.size());
  }
  std::uint64_t value() const { return h_; }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h_));
    return buf;
  }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ull;
};

}  // namespace reachnav
