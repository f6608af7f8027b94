#include "edrought/gridstore.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"

#include "edrought/error.hpp"

namespace edrought {

namespace {

constexpr char kMagic[4] = {'G', 'S', 'F', '1'};

template <typename T>
T byteswap_if_needed(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    std::reverse(std::begin(b), std::end(b));
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

class Writer {
 public:
  explicit Writer(std::vector<std::uint8_t>& out) : out_(out) {}

  template <typename T>
  void put(T v) {
    v = byteswap_if_needed(v);
    const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
    out_.insert(out_.end(), p, p + sizeof(T));
  }

  void put_bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    out_.insert(out_.end(), p, p + n);
  }

 private:
  std::vector<std::uint8_t>& out_;
};

class Reader {
 public:
  Reader(const std::vector<std::uint8_t>& in, std::string origin) : in_(in), origin_(std::move(origin)) {}

  template <typename T>
  T get() {
    require(sizeof(T));
    T v;
    std::memcpy(&v, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return byteswap_if_needed(v);
  }

  std::string get_string(std::size_t n) {
    require(n);
    std::string s(reinterpret_cast<const char*>(in_.data() + pos_), n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void require(std::size_t n) const {
    if (remaining() < n) {
      throw Error(ErrorKind::CorruptPayload, origin_ + ": unexpected end of file at byte " + std::to_string(pos_));
    }
  }

  const std::vector<std::uint8_t>& in_;
  std::string origin_;
  std::size_t pos_ = 0;
};

std::string hex_bits(float v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08x", std::bit_cast<std::uint32_t>(v));
  return buf;
}

nlohmann::json metadata_for(const GridDataset& ds) {
  nlohmann::json meta;
  meta["format"] = "GSF1";
  meta["variable"] = ds.variable;
  meta["calendar"] = std::string(to_string(ds.calendar));
  meta["dims"] = {{"nt", ds.nt()}, {"ny", ds.ny()}, {"nx", ds.nx()}};
  meta["dtype"] = "float32";
  meta["arrays"] = {"year", "month", "day", "lat2d", "lon2d", "values"};
  meta["fill_value_bits"] = hex_bits(ds.fill_value);
  if (std::isfinite(ds.fill_value)) {
    meta["fill_value"] = ds.fill_value;
  } else {
    meta["fill_value"] = nullptr;
  }
  meta["attrs"] = ds.attrs;
  return meta;
}

std::string cell_index(Eigen::Index i, Eigen::Index j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

}  // namespace

bool bitwise_equal(const GridDataset& a, const GridDataset& b) {
  if (a.variable != b.variable || a.calendar != b.calendar || a.dates != b.dates || a.attrs != b.attrs) {
    return false;
  }
  if (std::bit_cast<std::uint32_t>(a.fill_value) != std::bit_cast<std::uint32_t>(b.fill_value)) return false;
  if (a.lat2d.rows() != b.lat2d.rows() || a.lat2d.cols() != b.lat2d.cols()) return false;
  if (a.lon2d.rows() != b.lon2d.rows() || a.lon2d.cols() != b.lon2d.cols()) return false;
  if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols()) return false;
  auto same_bytes = [](const auto& x, const auto& y) {
    return std::memcmp(x.data(), y.data(), sizeof(*x.data()) * static_cast<std::size_t>(x.size())) == 0;
  };
  return same_bytes(a.lat2d, b.lat2d) && same_bytes(a.lon2d, b.lon2d) && same_bytes(a.values, b.values);
}

ValidationReport validate(const GridDataset& ds) {
  ValidationReport report;
  auto add = [&](std::string invariant, std::string detail) {
    report.violations.push_back({std::move(invariant), std::move(detail)});
  };

  if (ds.lon2d.rows() != ds.lat2d.rows() || ds.lon2d.cols() != ds.lat2d.cols()) {
    add("coordinate shape", "lat2d and lon2d shapes differ");
  }
  if (ds.values.rows() != ds.nt() || ds.values.cols() != ds.ny() * ds.nx()) {
    add("values shape", "values must be nt x (ny*nx)");
    return report;  // element access below relies on consistent shapes
  }

  for (std::size_t t = 0; t < ds.dates.size(); ++t) {
    if (!is_valid(ds.calendar, ds.dates[t])) {
      add("invalid calendar date", "index " + std::to_string(t) + ": " + format_date(ds.dates[t]) + " not in " +
                                       std::string(to_string(ds.calendar)) + " calendar");
      break;
    }
  }
  for (std::size_t t = 1; t < ds.dates.size(); ++t) {
    if (!(ds.dates[t - 1] < ds.dates[t])) {
      add("non-monotonic time", "index " + std::to_string(t) + ": " + format_date(ds.dates[t]) +
                                    " does not follow " + format_date(ds.dates[t - 1]));
      break;
    }
  }

  [&] {
    for (Eigen::Index i = 0; i < ds.ny(); ++i) {
      for (Eigen::Index j = 0; j < ds.nx(); ++j) {
        const double lat = ds.lat2d(i, j);
        if (!(lat >= -90.0 && lat <= 90.0)) {
          add("latitude out of range", "cell " + cell_index(i, j));
          return;
        }
      }
    }
  }();
  if (ds.lon2d.rows() == ds.lat2d.rows() && ds.lon2d.cols() == ds.lat2d.cols()) {
    [&] {
      for (Eigen::Index i = 0; i < ds.ny(); ++i) {
        for (Eigen::Index j = 0; j < ds.nx(); ++j) {
          const double lon = ds.lon2d(i, j);
          if (!(lon >= -180.0 && lon < 180.0)) {
            add("longitude not normalized", "cell " + cell_index(i, j) + " outside [-180, 180)");
            return;
          }
        }
      }
    }();
  }

  const bool non_negative = ds.variable == "sfcWind" || ds.variable == "rsds";
  bool seen_non_finite = false;
  bool seen_negative = false;
  for (Eigen::Index t = 0; t < ds.values.rows(); ++t) {
    for (Eigen::Index c = 0; c < ds.values.cols(); ++c) {
      const float v = ds.values(t, c);
      if (ds.is_fill(v)) continue;
      const std::string where = "index (" + std::to_string(t) + "," + std::to_string(c / ds.nx()) + "," +
                                std::to_string(c % ds.nx()) + ")";
      if (!std::isfinite(v)) {
        if (!seen_non_finite) add("non-finite value", where);
        seen_non_finite = true;
      } else if (non_negative && v < 0.0f) {
        if (!seen_negative) add(ds.variable == "sfcWind" ? "negative wind" : "negative radiation", where);
        seen_negative = true;
      }
    }
  }
  return report;
}

std::vector<std::uint8_t> encode_dataset(const GridDataset& ds) {
  const auto report = validate(ds);
  if (!report.ok()) {
    const auto& v = report.violations.front();
    throw Error(ErrorKind::InvalidDataset, "refusing to encode: " + v.invariant + " at " + v.detail);
  }
  for (const auto& d : ds.dates) {
    if (d.year < INT16_MIN || d.year > INT16_MAX) {
      throw Error(ErrorKind::InvalidDataset, "year " + std::to_string(d.year) + " does not fit int16");
    }
  }
  const std::string meta = metadata_for(ds).dump();
  std::vector<std::uint8_t> out;
  const auto nt = static_cast<std::size_t>(ds.nt());
  const auto ncell = static_cast<std::size_t>(ds.ny() * ds.nx());
  out.reserve(12 + meta.size() + nt * 6 + ncell * 16 + nt * ncell * 4);
  Writer w(out);
  w.put_bytes(kMagic, 4);
  w.put<std::uint64_t>(meta.size());
  w.put_bytes(meta.data(), meta.size());
  for (const auto& d : ds.dates) w.put<std::int16_t>(static_cast<std::int16_t>(d.year));
  for (const auto& d : ds.dates) w.put<std::int16_t>(static_cast<std::int16_t>(d.month));
  for (const auto& d : ds.dates) w.put<std::int16_t>(static_cast<std::int16_t>(d.day));
  for (Eigen::Index k = 0; k < ds.lat2d.size(); ++k) w.put<double>(ds.lat2d.data()[k]);
  for (Eigen::Index k = 0; k < ds.lon2d.size(); ++k) w.put<double>(ds.lon2d.data()[k]);
  for (Eigen::Index k = 0; k < ds.values.size(); ++k) w.put<float>(ds.values.data()[k]);
  return out;
}

GridDataset decode_dataset(const std::vector<std::uint8_t>& bytes, const std::string& origin) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorKind::BadMagic, origin + ": not a GSF1 file");
  }
  Reader r(bytes, origin);
  r.get_string(4);
  const auto meta_len = r.get<std::uint64_t>();
  if (meta_len > r.remaining()) {
    throw Error(ErrorKind::CorruptPayload, origin + ": metadata length exceeds file size");
  }
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(r.get_string(static_cast<std::size_t>(meta_len)));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::CorruptPayload, origin + ": metadata is not valid JSON (" + e.what() + ")");
  }

  GridDataset ds;
  std::int64_t nt = 0, ny = 0, nx = 0;
  try {
    if (meta.at("dtype").get<std::string>() != "float32") {
      throw Error(ErrorKind::CorruptPayload, origin + ": unsupported dtype");
    }
    ds.variable = meta.at("variable").get<std::string>();
    ds.calendar = parse_calendar(meta.at("calendar").get<std::string>());
    nt = meta.at("dims").at("nt").get<std::int64_t>();
    ny = meta.at("dims").at("ny").get<std::int64_t>();
    nx = meta.at("dims").at("nx").get<std::int64_t>();
    const auto bits = static_cast<std::uint32_t>(std::stoul(meta.at("fill_value_bits").get<std::string>(), nullptr, 16));
    ds.fill_value = std::bit_cast<float>(bits);
    if (meta.contains("attrs")) ds.attrs = meta.at("attrs").get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::CorruptPayload, origin + ": malformed metadata (" + e.what() + ")");
  } catch (const std::logic_error& e) {
    throw Error(ErrorKind::CorruptPayload, origin + ": malformed metadata (" + e.what() + ")");
  }
  if (nt < 0 || ny < 0 || nx < 0) throw Error(ErrorKind::CorruptPayload, origin + ": negative dimension");

  const auto unt = static_cast<std::uint64_t>(nt);
  const auto ncell = static_cast<std::uint64_t>(ny) * static_cast<std::uint64_t>(nx);
  const std::uint64_t expected = unt * 6 + ncell * 16 + unt * ncell * 4;
  if (expected != r.remaining()) {
    throw Error(ErrorKind::CorruptPayload, origin + ": payload is " + std::to_string(r.remaining()) +
                                               " bytes, metadata declares " + std::to_string(expected));
  }

  ds.dates.resize(unt);
  for (auto& d : ds.dates) d.year = r.get<std::int16_t>();
  for (auto& d : ds.dates) d.month = r.get<std::int16_t>();
  for (auto& d : ds.dates) d.day = r.get<std::int16_t>();
  ds.lat2d.resize(ny, nx);
  ds.lon2d.resize(ny, nx);
  for (Eigen::Index k = 0; k < ds.lat2d.size(); ++k) ds.lat2d.data()[k] = r.get<double>();
  for (Eigen::Index k = 0; k < ds.lon2d.size(); ++k) ds.lon2d.data()[k] = r.get<double>();
  ds.values.resize(nt, ny * nx);
  for (Eigen::Index k = 0; k < ds.values.size(); ++k) ds.values.data()[k] = r.get<float>();

  const auto report = validate(ds);
  if (!report.ok()) {
    const auto& v = report.violations.front();
    ErrorKind kind = ErrorKind::InvalidDataset;
    if (v.invariant == "invalid calendar date") kind = ErrorKind::InvalidCalendarDate;
    if (v.invariant == "non-monotonic time") kind = ErrorKind::NonMonotonicTime;
    throw Error(kind, origin + ": " + v.invariant + " at " + v.detail);
  }
  return ds;
}

GridDataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_dataset(bytes, path.string());
}

void write_dataset(const GridDataset& ds, const std::filesystem::path& path) {
  const auto bytes = encode_dataset(ds);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::IoFailure, "write failed for " + path.string());
}

}  // namespace edrought
