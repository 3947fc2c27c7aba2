#include "napmon/data.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "json_util.hpp"
#include "napmon/error.hpp"

namespace napmon {

Dataset::Dataset(std::size_t dim, std::vector<double> values)
    : dim_(dim), values_(std::move(values)) {
  if (dim_ == 0 && !values_.empty()) throw DimensionError("dataset with dim 0 cannot hold values");
  if (dim_ != 0 && values_.size() % dim_ != 0) {
    throw DimensionError("value count " + std::to_string(values_.size()) +
                         " is not a multiple of dim " + std::to_string(dim_));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw ConfigError("dataset contains a non-finite value");
  }
}

void Dataset::add_row(std::span<const double> row) {
  if (row.size() != dim_) {
    throw DimensionError("row has length " + std::to_string(row.size()) + ", dataset dim is " +
                         std::to_string(dim_));
  }
  for (double v : row) {
    if (!std::isfinite(v)) throw ConfigError("dataset row contains a non-finite value");
  }
  values_.insert(values_.end(), row.begin(), row.end());
}

void Dataset::append(const Dataset& other) {
  if (other.empty()) return;
  if (other.dim_ != dim_) {
    throw DimensionError("cannot append dim " + std::to_string(other.dim_) + " rows to dim " +
                         std::to_string(dim_) + " dataset");
  }
  values_.insert(values_.end(), other.values_.begin(), other.values_.end());
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::uint32_t get_u32(std::string_view bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(bytes[at + i]);
  return v;
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

}  // namespace

Dataset parse_csv(std::string_view text) {
  std::size_t dim = 0;
  std::vector<double> values;
  std::size_t line_no = 0;
  std::size_t row_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty()) continue;

    std::size_t fields = 0;
    while (true) {
      const std::size_t comma = line.find(',');
      std::string_view field = trim(line.substr(0, comma));
      double v = 0.0;
      const char* first = field.data();
      const char* last = field.data() + field.size();
      if (!field.empty() && *first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, v);
      const std::string where = "line " + std::to_string(line_no) + ", field " + std::to_string(fields + 1);
      if (field.empty() || ec != std::errc() || ptr != last) {
        throw ParseError(where, "cannot parse '" + std::string(field) + "' as a number");
      }
      if (!std::isfinite(v)) throw ParseError(where, "value is not finite");
      values.push_back(v);
      ++fields;
      if (comma == std::string_view::npos) break;
      line = line.substr(comma + 1);
    }
    if (row_no == 0) {
      dim = fields;
    } else if (fields != dim) {
      throw ParseError("line " + std::to_string(line_no),
                       "ragged row " + std::to_string(row_no) + ": " + std::to_string(fields) +
                           " fields, expected " + std::to_string(dim));
    }
    ++row_no;
  }
  return Dataset(dim, std::move(values));
}

std::string to_csv(const Dataset& data) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto row = data.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out.push_back(',');
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, row[j]);
      out.append(buf, ptr);
    }
    out.push_back('\n');
  }
  return out;
}

Dataset parse_raw_f32(std::string_view bytes) {
  if (bytes.size() < 16) throw ParseError("header", "truncated raw header");
  if (std::memcmp(bytes.data(), kRawMagic, 4) != 0) throw ParseError("header", "bad magic");
  const std::uint32_t version = get_u32(bytes, 4);
  if (version != kRawVersion) {
    throw ParseError("header", "unsupported raw format version " + std::to_string(version));
  }
  const std::uint32_t count = get_u32(bytes, 8);
  const std::uint32_t dim = get_u32(bytes, 12);
  const std::uint64_t expected = 16 + std::uint64_t{count} * dim * 4;
  if (bytes.size() < expected) {
    throw ParseError("payload", "truncated raw payload: " + std::to_string(bytes.size()) +
                                    " bytes, expected " + std::to_string(expected));
  }
  if (bytes.size() > expected) throw ParseError("payload", "trailing bytes after raw payload");
  if (dim == 0 && count != 0) throw ParseError("header", "dim 0 with nonzero row count");

  std::vector<double> values;
  values.reserve(std::size_t{count} * dim);
  for (std::size_t i = 0; i < std::size_t{count} * dim; ++i) {
    const float f = std::bit_cast<float>(get_u32(bytes, 16 + 4 * i));
    if (!std::isfinite(f)) {
      throw ParseError("row " + std::to_string(i / dim) + ", column " + std::to_string(i % dim),
                       "value is not finite");
    }
    values.push_back(f);
  }
  return Dataset(dim, std::move(values));
}

std::string to_raw_f32(const Dataset& data) {
  std::string out(kRawMagic, 4);
  put_u32(out, kRawVersion);
  put_u32(out, static_cast<std::uint32_t>(data.size()));
  put_u32(out, static_cast<std::uint32_t>(data.dim()));
  for (double v : data.values()) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  return out;
}

DataFormat detect_format(std::string_view bytes) {
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kRawMagic, 4) == 0) return DataFormat::RawF32;
  return DataFormat::Csv;
}

DataFormat parse_format(std::string_view name) {
  if (name == "csv") return DataFormat::Csv;
  if (name == "raw_f32" || name == "raw") return DataFormat::RawF32;
  throw ConfigError("unknown data format '" + std::string(name) + "'");
}

Dataset load_dataset(const std::filesystem::path& path) {
  const std::string bytes = detail::read_file(path);
  return detect_format(bytes) == DataFormat::RawF32 ? parse_raw_f32(bytes) : parse_csv(bytes);
}

Dataset load_dataset(const std::filesystem::path& path, DataFormat format) {
  const std::string bytes = detail::read_file(path);
  return format == DataFormat::RawF32 ? parse_raw_f32(bytes) : parse_csv(bytes);
}

void save_dataset(const std::filesystem::path& path, const Dataset& data, DataFormat format) {
  detail::write_file(path, format == DataFormat::RawF32 ? to_raw_f32(data) : to_csv(data));
}

}  // namespace napmon
