#include "amc/signalgen/dataset_io.hpp"

#include <string>

#include "amc/common/binary_io.hpp"
#include "amc/common/error.hpp"

namespace amc::signalgen {
namespace {

void check_consistent(const Dataset& ds) {
  if (ds.class_names.size() > 255) throw ValueError("write_dataset: more than 255 classes");
  for (const auto& name : ds.class_names) {
    if (name.size() > 255) throw ValueError("write_dataset: class name longer than 255 bytes");
  }
  if (ds.frame_len > 0xFFFFFFFFull) throw ValueError("write_dataset: frame_len exceeds u32");
  for (std::size_t i = 0; i < ds.frames.size(); ++i) {
    const auto& f = ds.frames[i];
    if (f.samples.size() != 2 * ds.frame_len) {
      throw ShapeError("write_dataset: frame " + std::to_string(i) + " has length " + std::to_string(f.length()) +
                       ", dataset frame_len is " + std::to_string(ds.frame_len));
    }
    if (f.class_id >= ds.class_names.size()) {
      throw ValueError("write_dataset: frame " + std::to_string(i) + " has class id " +
                       std::to_string(f.class_id) + " outside the class table");
    }
  }
}

}  // namespace

std::vector<std::byte> encode_dataset(const Dataset& dataset) {
  check_consistent(dataset);
  binary::Writer w;
  w.put_bytes(std::string_view(kDatasetMagic, 4));
  w.put<std::uint16_t>(kDatasetVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(dataset.frame_len));
  w.put<std::uint64_t>(dataset.frames.size());
  w.put<std::uint8_t>(static_cast<std::uint8_t>(dataset.class_names.size()));
  for (const auto& name : dataset.class_names) {
    w.put<std::uint8_t>(static_cast<std::uint8_t>(name.size()));
    w.put_bytes(name);
  }
  for (const auto& f : dataset.frames) {
    w.put<std::uint8_t>(f.class_id);
    w.put<std::int16_t>(f.snr_db);
    for (float v : f.samples) w.put_f32(v);
  }
  return w.bytes();
}

Dataset decode_dataset(std::vector<std::byte> bytes) {
  binary::Reader r(std::move(bytes), "dataset");
  if (r.remaining() < 4 || r.get_string(4) != std::string_view(kDatasetMagic, 4)) {
    throw FormatError(FormatError::Kind::BadMagic, "dataset: bad magic (expected \"IQDS\")");
  }
  const auto version = r.get<std::uint16_t>();
  if (version != kDatasetVersion) {
    throw FormatError(FormatError::Kind::BadVersion,
                      "dataset: unsupported version " + std::to_string(version) + " (expected 1)");
  }
  Dataset ds;
  ds.frame_len = r.get<std::uint32_t>();
  const auto count = r.get<std::uint64_t>();
  const auto class_count = r.get<std::uint8_t>();
  for (unsigned c = 0; c < class_count; ++c) {
    const auto len = r.get<std::uint8_t>();
    ds.class_names.push_back(r.get_string(len));
  }
  const std::size_t record_bytes = 3 + 8 * ds.frame_len;
  if (count > r.remaining() / record_bytes) {
    throw FormatError(FormatError::Kind::Truncated, "dataset: truncated (header promises " + std::to_string(count) +
                                                        " frames, payload holds " +
                                                        std::to_string(r.remaining() / record_bytes) + ")");
  }
  ds.frames.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    auto& f = ds.frames[i];
    f.class_id = r.get<std::uint8_t>();
    if (f.class_id >= class_count) {
      throw FormatError(FormatError::Kind::Invalid, "dataset: frame " + std::to_string(i) + " has class id " +
                                                        std::to_string(f.class_id) + " outside the class table");
    }
    f.snr_db = r.get<std::int16_t>();
    f.samples.resize(2 * ds.frame_len);
    for (auto& v : f.samples) v = r.get_f32();
  }
  if (r.remaining() != 0) {
    throw FormatError(FormatError::Kind::Invalid,
                      "dataset: " + std::to_string(r.remaining()) + " trailing bytes after the last frame");
  }
  return ds;
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  binary::write_file(path, encode_dataset(dataset));
}

Dataset read_dataset(const std::filesystem::path& path) { return decode_dataset(binary::read_file(path)); }

}  // namespace amc::signalgen
