#include "mtforge/gateway/cache.hpp"

#include <fstream>
#include <sstream>
#include <thread>

#include "mtforge/core/error.hpp"

namespace mtforge::gateway {

namespace fs = std::filesystem;

ResponseCache::ResponseCache(std::optional<fs::path> dir) : dir_(std::move(dir)) {
  if (dir_) fs::create_directories(*dir_);
}

std::optional<std::string> ResponseCache::get(const std::string& key) {
  {
    std::lock_guard lock(mu_);
    if (auto it = memory_.find(key); it != memory_.end()) return it->second;
  }
  if (!dir_) return std::nullopt;
  std::ifstream in(*dir_ / key, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string payload = buf.str();
  std::lock_guard lock(mu_);
  memory_.emplace(key, payload);
  return payload;
}

void ResponseCache::put(const std::string& key, const std::string& payload) {
  {
    std::lock_guard lock(mu_);
    memory_[key] = payload;
  }
  if (!dir_) return;
  std::ostringstream tmp_name;
  tmp_name << key << ".tmp." << std::this_thread::get_id();
  const fs::path tmp = *dir_ / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) fail(ErrorCode::DataError, "cannot write cache entry " + tmp.string());
  }
  fs::rename(tmp, *dir_ / key);
}

}  // namespace mtforge::gateway
