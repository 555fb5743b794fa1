#pragma once

#include <zlib.h>

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "hdx/errors.hpp"
#include "hdx/image.hpp"

namespace hdx {

/// Reads a whole file; transparently inflates gzip input (0x1f 0x8b prefix).
inline std::vector<uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<uint8_t> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed on " + path.string());
  if (raw.size() >= 2 && raw[0] == 0x1f && raw[1] == 0x8b) {
    z_stream zs{};
    if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK)
      throw IoError("zlib init failed for " + path.string());
    std::vector<uint8_t> out;
    out.reserve(raw.size() * 4);
    std::vector<uint8_t> buf(1 << 16);
    zs.next_in = raw.data();
    zs.avail_in = static_cast<uInt>(raw.size());
    int rc = Z_OK;
    do {
      zs.next_out = buf.data();
      zs.avail_out = static_cast<uInt>(buf.size());
      rc = inflate(&zs, Z_NO_FLUSH);
      if (rc != Z_OK && rc != Z_STREAM_END) {
        inflateEnd(&zs);
        throw FormatError("corrupt gzip stream in " + path.string());
      }
      out.insert(out.end(), buf.data(), buf.data() + (buf.size() - zs.avail_out));
    } while (rc != Z_STREAM_END);
    inflateEnd(&zs);
    return out;
  }
  return raw;
}

// Little-endian scalar helpers for the model format.

inline void put_u32le(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(uint8_t(v >> (8 * i)));
}
inline void put_u64le(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(uint8_t(v >> (8 * i)));
}
inline void put_i32le(std::vector<uint8_t>& out, int32_t v) {
  put_u32le(out, static_cast<uint32_t>(v));
}

class ByteReader {
 public:
  ByteReader(std::span<const uint8_t> bytes, std::string source)
      : bytes_(bytes), source_(std::move(source)) {}

  size_t offset() const { return pos_; }
  size_t remaining() const { return bytes_.size() - pos_; }

  uint32_t u32le(const char* field) {
    need(4, field);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= uint32_t(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  uint64_t u64le(const char* field) {
    need(8, field);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= uint64_t(bytes_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }
  int32_t i32le(const char* field) { return static_cast<int32_t>(u32le(field)); }
  uint32_t u32be(const char* field) {
    need(4, field);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | bytes_[pos_ + i];
    pos_ += 4;
    return v;
  }
  std::span<const uint8_t> bytes(size_t n, const char* field) {
    need(n, field);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  void need(size_t n, const char* field) {
    if (remaining() < n)
      throw FormatError(source_ + ": truncated while reading " + field + " at byte offset " +
                        std::to_string(pos_));
  }

 private:
  std::span<const uint8_t> bytes_;
  std::string source_;
  size_t pos_ = 0;
};

/// Writes bytes to `path` atomically: stage to a sibling temp file, then
/// rename over the target. Re-runs overwrite outputs without ever exposing
/// a partial file.
inline void atomic_write_file(const std::filesystem::path& path, std::span<const uint8_t> bytes) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

inline void atomic_write_file(const std::filesystem::path& path, const std::string& text) {
  atomic_write_file(path, std::span<const uint8_t>(
                              reinterpret_cast<const uint8_t*>(text.data()), text.size()));
}

/// Binary PGM (P5), maxval 255.
inline void write_pgm(const std::filesystem::path& path, const Image& image) {
  std::string header = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) +
                       "\n255\n";
  std::vector<uint8_t> bytes(header.begin(), header.end());
  bytes.insert(bytes.end(), image.pixels.begin(), image.pixels.end());
  atomic_write_file(path, bytes);
}

inline Image read_pgm(const std::filesystem::path& path) {
  const std::vector<uint8_t> bytes = read_file_bytes(path);
  size_t pos = 0;
  auto token = [&]() -> std::string {
    while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
    if (pos < bytes.size() && bytes[pos] == '#') {  // comment line
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
    }
    size_t start = pos;
    while (pos < bytes.size() && !std::isspace(bytes[pos])) ++pos;
    return std::string(bytes.begin() + start, bytes.begin() + pos);
  };
  if (token() != "P5") throw FormatError(path.string() + ": not a binary PGM (expected P5)");
  const int w = std::stoi(token());
  const int h = std::stoi(token());
  const int maxval = std::stoi(token());
  if (maxval != 255) throw FormatError(path.string() + ": unsupported maxval " +
                                       std::to_string(maxval));
  ++pos;  // single whitespace after maxval
  if (bytes.size() - pos < size_t(w) * h)
    throw FormatError(path.string() + ": truncated pixel data at byte offset " +
                      std::to_string(pos));
  Image img(w, h);
  std::memcpy(img.pixels.data(), bytes.data() + pos, size_t(w) * h);
  return img;
}

}  // namespace hdx
