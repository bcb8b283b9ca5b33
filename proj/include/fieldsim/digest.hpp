#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace fieldsim {

// 64-bit FNV-1a. Used for cache keys, fixture keys, and manifest digests;
// stability across platforms matters more than cryptographic strength here.
class Fnv1a64 {
 public:
  Fnv1a64& update(std::string_view bytes) {
    for (unsigned char c : bytes) {
      state_ ^= c;
      state_ *= 0x100000001b3ULL;
    }
    return *this;
  }

  // Length-framed update so that ("ab","c") and ("a","bc") never collide.
  Fnv1a64& update_framed(std::string_view bytes) {
    update(std::to_string(bytes.size()));
    update(":");
    update(bytes);
    update(";");
    return *this;
  }

  std::uint64_t value() const { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string digest_hex(std::string_view bytes);

}  // namespace fieldsim
