#include "sma/seed.hpp"

namespace sma {

namespace {

constexpr std::uint64_t fmix64(std::uint64_t k) noexcept {
  k ^= k >> 33;
  k *= 0xFF51AFD7ED558CCDULL;
  k ^= k >> 33;
  k *= 0xC4CEB9FE1A85EC53ULL;
  k ^= k >> 33;
  return k;
}

}  // namespace

std::uint64_t SeedPath::hash_label(std::string_view label) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return fmix64(h);
}

std::uint64_t SeedPath::derive(std::uint64_t parent_key, std::uint64_t label_hash,
                               std::uint64_t index) noexcept {
  std::uint64_t k = fmix64(parent_key + 0x9E3779B97F4A7C15ULL) ^ label_hash;
  k = fmix64(k + 0x632BE59BD9B4E019ULL);
  k ^= fmix64(index + 0xD6E8FEB86659FD93ULL);
  return fmix64(k);
}

SeedPath::SeedPath(std::uint64_t master_seed)
    : master_(master_seed), key_(fmix64(master_seed ^ 0x5851F42D4C957F2DULL)) {}

SeedPath SeedPath::child(std::string_view label, std::uint64_t index) const {
  SeedPath c = *this;
  c.key_ = derive(key_, hash_label(label), index);
  c.path_.emplace_back(std::string(label), index);
  return c;
}

std::string SeedPath::to_string() const {
  std::string s = std::to_string(master_);
  for (const auto& [label, index] : path_) {
    s += '/';
    s += label;
    s += ':';
    s += std::to_string(index);
  }
  return s;
}

}  // namespace sma
