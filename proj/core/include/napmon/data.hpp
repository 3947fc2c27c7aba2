#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace napmon {

/// Rows of equal length, stored contiguously.
class Dataset {
 public:
  explicit Dataset(std::size_t dim = 0) : dim_(dim) {}
  Dataset(std::size_t dim, std::vector<double> values);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : values_.size() / dim_; }
  bool empty() const noexcept { return size() == 0; }
  std::span<const double> row(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }
  std::span<const double> values() const noexcept { return values_; }

  void add_row(std::span<const double> row);
  void append(const Dataset& other);

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t dim_;
  std::vector<double> values_;
};

enum class DataFormat { Csv, RawF32 };

/// Header of the raw format: "NAPD", then version, row count and dim as
/// little-endian uint32. Followed by count * dim little-endian float32 values.
inline constexpr char kRawMagic[4] = {'N', 'A', 'P', 'D'};
inline constexpr std::uint32_t kRawVersion = 1;

/// Comma-separated rows, no header. Blank lines are skipped.
Dataset parse_csv(std::string_view text);
std::string to_csv(const Dataset& data);

Dataset parse_raw_f32(std::string_view bytes);
std::string to_raw_f32(const Dataset& data);

/// Raw when the file starts with the raw magic, CSV otherwise.
DataFormat detect_format(std::string_view bytes);
DataFormat parse_format(std::string_view name);

Dataset load_dataset(const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path, DataFormat format);
void save_dataset(const std::filesystem::path& path, const Dataset& data, DataFormat format);

}  // namespace napmon
