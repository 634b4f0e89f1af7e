#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "amc/common/error.hpp"

namespace amc::binary {

std::vector<std::byte> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::vector<std::byte>& bytes);

// Little-endian byte sink.
class Writer {
 public:
  template <typename U>
    requires std::is_integral_v<U>
  void put(U value) {
    using Unsigned = std::make_unsigned_t<U>;
    auto bits = static_cast<Unsigned>(value);
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      bytes_.push_back(static_cast<std::byte>(bits & 0xFFu));
      bits = static_cast<Unsigned>(bits >> 8);
    }
  }

  void put_f32(float value) { put(std::bit_cast<std::uint32_t>(value)); }

  void put_bytes(std::string_view s) {
    for (char c : s) bytes_.push_back(static_cast<std::byte>(c));
  }

  const std::vector<std::byte>& bytes() const noexcept { return bytes_; }

  void save(const std::filesystem::path& path) const { write_file(path, bytes_); }

 private:
  std::vector<std::byte> bytes_;
};

// Little-endian cursor over an in-memory file image. Every read that would run
// past the end throws FormatError(Truncated).
class Reader {
 public:
  Reader(std::vector<std::byte> bytes, std::string what)
      : bytes_(std::move(bytes)), what_(std::move(what)) {}

  static Reader from_file(const std::filesystem::path& path, std::string what) {
    return Reader(read_file(path), std::move(what));
  }

  template <typename U>
    requires std::is_integral_v<U>
  U get() {
    require(sizeof(U));
    std::make_unsigned_t<U> bits = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      bits |= static_cast<std::make_unsigned_t<U>>(
          static_cast<std::make_unsigned_t<U>>(std::to_integer<std::uint8_t>(bytes_[pos_ + i])) << (8 * i));
    }
    pos_ += sizeof(U);
    return static_cast<U>(bits);
  }

  float get_f32() { return std::bit_cast<float>(get<std::uint32_t>()); }

  std::string get_string(std::size_t n) {
    require(n);
    std::string s(n, '\0');
    std::memcpy(s.data(), bytes_.data() + pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
  const std::string& what() const noexcept { return what_; }

 private:
  void require(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw FormatError(FormatError::Kind::Truncated,
                        what_ + ": truncated (needed " + std::to_string(n) + " bytes at offset " +
                            std::to_string(pos_) + ", file has " + std::to_string(bytes_.size()) + ")");
    }
  }

  std::vector<std::byte> bytes_;
  std::string what_;
  std::size_t pos_ = 0;
};

}  // namespace amc::binary
