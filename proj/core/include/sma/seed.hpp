#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sma/random.hpp"

namespace sma {

// Used whenever the caller does not pick a master seed.
inline constexpr std::uint64_t kDefaultMasterSeed = 0x2545F4914F6CDD1DULL;

// Hierarchical seed: a master seed plus a path of (label, index) steps. The
// derived key is a keyed hash of the whole path, so any trial, matrix row or
// coin can be regenerated from its path alone.
class SeedPath {
 public:
  explicit SeedPath(std::uint64_t master_seed);

  SeedPath child(std::string_view label, std::uint64_t index = 0) const;

  std::uint64_t master() const noexcept { return master_; }
  std::uint64_t key() const noexcept { return key_; }
  const std::vector<std::pair<std::string, std::uint64_t>>& path() const noexcept { return path_; }

  Rng rng() const noexcept { return Rng(key_); }

  // "master/label:index/..." for logs and manifests.
  std::string to_string() const;

  // Key of child(label, index) without materializing the path; used per row
  // in the neural allocator.
  static std::uint64_t derive(std::uint64_t parent_key, std::uint64_t label_hash,
                              std::uint64_t index) noexcept;
  static std::uint64_t hash_label(std::string_view label) noexcept;

 private:
  std::uint64_t master_;
  std::uint64_t key_;
  std::vector<std::pair<std::string, std::uint64_t>> path_;
};

}  // namespace sma
