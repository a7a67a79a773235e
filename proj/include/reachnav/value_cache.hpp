#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "reachnav/grid.hpp"

namespace reachnav {

// Solved value fields keyed by a content hash of everything that determines
// them. Lookups are safe from concurrent threads; each key is solved at most
// once per process and, with a directory, persisted as <key>.vf.
class ValueCache {
 public:
  explicit ValueCache(std::optional<std::filesystem::path> dir = std::nullopt);

  // Directory from REACHNAV_CACHE_DIR, else the fallback.
  static std::optional<std::filesystem::path> dir_from_env(
      std::optional<std::filesystem::path> fallback);

  std::shared_ptr<const ValueField> get(
      std::uint64_t key, const std::function<ValueField()>& solve);

  const std::optional<std::filesystem::path>& dir() const { return dir_; }
  std::size_t solves() const;

 private:
  std::optional<std::filesystem::path> dir_;
  mutable std::mutex mu_;
  std::map<std::uint64_t, std::shared_future<std::shared_ptr<const ValueField>>>
      entries_;
  std::size_t solves_ = 0;
};

}  // namespace reachnav
