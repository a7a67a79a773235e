#include "reachnav/value_cache.hpp"

#include <cstdio>
#include <cstdlib>
#include <system_error>

#include "reachnav/field_io.hpp"

namespace reachnav {

ValueCache::ValueCache(std::optional<std::filesystem::path> dir)
    : dir_(std::move(dir)) {}

std::optional<std::filesystem::path> ValueCache::dir_from_env(
    std::optional<std::filesystem::path> fallback) {
  if (const char* env = std::getenv("REACHNAV_CACHE_DIR"); env && *env)
    return std::filesystem::path(env);
  return fallback;
}

std::size_t ValueCache::solves() const {
  std::lock_guard lock(mu_);
  return solves_;
}

std::shared_ptr<const ValueField> ValueCache::get(
    std::uint64_t key, const std::function<ValueField()>& solve) {
  std::promise<std::shared_ptr<const ValueField>> promise;
  std::shared_future<std::shared_ptr<const ValueField>> existing;
  {
    std::lock_guard lock(mu_);
    if (auto it = entries_.find(key); it != entries_.end())
      existing = it->second;
    else
      entries_.emplace(key, promise.get_future().share());
  }
  if (existing.valid()) return existing.get();

  std::optional<std::filesystem::path> file;
  if (dir_) {
    char name[24];
    std::snprintf(name, sizeof name, "%016llx.vf",
                  static_cast<unsigned long long>(key));
    file = *dir_ / name;
  }
  try {
    std::shared_ptr<const ValueField> value;
    std::error_code ec;
    if (file && std::filesystem::exists(*file, ec)) {
      try {
        value = std::make_shared<const ValueField>(read_field(*file));
      } catch (const std::exception&) {
        value.reset();  // unreadable entry: solve again and overwrite
      }
    }
    if (!value) {
      value = std::make_shared<const ValueField>(solve());
      {
        std::lock_guard lock(mu_);
        ++solves_;
      }
      if (file) {
        auto tmp = *file;
        tmp += ".tmp" + std::to_string(reinterpret_cast<std::uintptr_t>(&promise));
        write_field(*value, tmp);
        std::filesystem::rename(tmp, *file);
      }
    }
    promise.set_value(value);
    return value;
  } catch (...) {
    promise.set_exception(std::current_exception());
    {
      std::lock_guard lock(mu_);
      entries_.erase(key);
    }
    throw;
  }
}

}  // namespace reachnav
