#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace lct::litmus {

enum class Width : int { B8 = 8, B16 = 16, B32 = 32, B64 = 64 };

inline uint64_t width_mask(Width w) {
  int bits = static_cast<int>(w);
  return bits == 64 ? ~uint64_t{0} : ((uint64_t{1} << bits) - 1);
}

// A runtime value: either an integer truncated to its declared width, or a
// symbolic address. Arithmetic wraps at the width; addresses never mix with
// integer arithmetic.
struct Value {
  uint64_t bits = 0;
  Width width = Width::B32;
  bool is_signed = true;
  std::optional<std::string> addr;  // set => symbolic address value

  static Value integer(int64_t v, Width w = Width::B32, bool sign = true) {
    Value r;
    r.bits = static_cast<uint64_t>(v) & width_mask(w);
    r.width = w;
    r.is_signed = sign;
    return r;
  }
  static Value address(std::string loc) {
    Value r;
    r.width = Width::B64;
    r.is_signed = false;
    r.addr = std::move(loc);
    return r;
  }

  bool is_address() const { return addr.has_value(); }

  // Sign/zero-extension of the truncated bits; the basis for cross-width
  // equality ("exact integer equality after width normalization").
  uint64_t canonical() const {
    if (addr) return 0;
    int bits_n = static_cast<int>(width);
    if (!is_signed || bits_n == 64) return bits;
    uint64_t sign_bit = uint64_t{1} << (bits_n - 1);
    return (bits ^ sign_bit) - sign_bit;  // sign-extend
  }

  int64_t as_signed() const { return static_cast<int64_t>(canonical()); }

  // Convert to a (possibly different) width: sign/zero-extend per the source
  // signedness, then truncate. Matches C integer conversion.
  Value narrowed(Width w, bool sign) const {
    if (addr) return *this;
    return integer(static_cast<int64_t>(canonical()), w, sign);
  }

  friend bool operator==(const Value& a, const Value& b) {
    if (a.addr || b.addr) return a.addr == b.addr;
    return a.canonical() == b.canonical();
  }
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }
  friend bool operator<(const Value& a, const Value& b) {
    if (a.is_address() != b.is_address()) return b.is_address();
    if (a.addr && b.addr) return *a.addr < *b.addr;
    return a.canonical() < b.canonical();
  }

  std::string str() const {
    if (addr) return *addr;
    if (is_signed) return std::to_string(as_signed());
    return std::to_string(canonical());
  }
};

Width parse_width(const std::string& type_name, bool& is_signed);

}  // namespace lct::litmus
