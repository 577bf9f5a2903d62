#include "rotorlab/snapshot.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

#include <zlib.h>

namespace rotorlab {

namespace {

constexpr char kMagic[4] = {'R', 'R', 'L', '1'};

class Writer {
 public:
  template <typename T>
  void put(T v) {
    using U = std::make_unsigned_t<T>;
    auto u = static_cast<U>(v);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      buf.push_back(static_cast<std::uint8_t>(u & 0xFF));
      u = static_cast<U>(u >> 8);
    }
  }
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const std::uint8_t*>(p);
    buf.insert(buf.end(), c, c + n);
  }
  std::vector<std::uint8_t> buf;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}
  template <typename T>
  T get() {
    need(sizeof(T));
    using U = std::make_unsigned_t<T>;
    U u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) u = static_cast<U>(u | (static_cast<U>(b_[pos_ + i]) << (8 * i)));
    pos_ += sizeof(T);
    return static_cast<T>(u);
  }
  std::string str(std::size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(b_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  std::size_t pos() const { return pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > b_.size()) throw SnapshotError("snapshot is truncated");
  }
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

std::uint32_t crc_of(std::span<const std::uint8_t> b) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large buffers in pieces.
  std::size_t off = 0;
  while (off < b.size()) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(b.size() - off, 1u << 30));
    crc = crc32(crc, b.data() + off, chunk);
    off += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

std::vector<std::uint8_t> encode_snapshot(const AggState& s) {
  Writer w;
  const int d = s.dim();
  w.bytes(kMagic, 4);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(d));
  w.put<std::uint64_t>(s.particles());
  w.put<std::uint64_t>(s.total_steps());
  const std::string desc = s.policy().descriptor();
  w.put<std::uint32_t>(static_cast<std::uint32_t>(desc.size()));
  w.bytes(desc.data(), desc.size());
  for (const auto& x : s.sites()) {
    for (int i = 0; i < d; ++i) w.put<std::int32_t>(x[i]);
  }
  const auto visits = s.odometer_entries();
  w.put<std::uint64_t>(visits.size());
  for (const auto& [x, v] : visits) {
    for (int i = 0; i < d; ++i) w.put<std::int32_t>(x[i]);
    w.put<std::uint64_t>(v);
  }
  w.put<std::uint32_t>(crc_of(w.buf));
  return std::move(w.buf);
}

AggState decode_snapshot(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8) throw SnapshotError("snapshot is truncated");
  const auto body = bytes.first(bytes.size() - 4);
  Reader tail(bytes.subspan(bytes.size() - 4));
  if (tail.get<std::uint32_t>() != crc_of(body)) throw SnapshotError("snapshot checksum mismatch");

  Reader r(body);
  if (r.str(4) != std::string(kMagic, 4)) throw SnapshotError("not a rotorlab snapshot (bad magic)");
  const auto d = static_cast<int>(r.get<std::uint32_t>());
  if (d < 1 || d > kMaxDim) throw SnapshotError("snapshot has unsupported dimension " + std::to_string(d));
  const auto n = r.get<std::uint64_t>();
  const auto total = r.get<std::uint64_t>();
  const auto len = r.get<std::uint32_t>();
  const std::string desc = r.str(len);
  // The remaining length bounds n, so a corrupt count cannot force a huge
  // allocation.
  if (n > body.size() / (4u * static_cast<unsigned>(d))) throw SnapshotError("snapshot site count is inconsistent");
  std::vector<Point> sites;
  sites.reserve(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    Point x(d);
    for (int i = 0; i < d; ++i) x[i] = r.get<std::int32_t>();
    sites.push_back(x);
  }
  const auto count = r.get<std::uint64_t>();
  if (count > n) throw SnapshotError("snapshot visit table is larger than the aggregate");
  std::vector<std::pair<Point, std::uint64_t>> visits;
  visits.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    Point x(d);
    for (int i = 0; i < d; ++i) x[i] = r.get<std::int32_t>();
    visits.emplace_back(x, r.get<std::uint64_t>());
  }
  if (r.pos() != body.size()) throw SnapshotError("snapshot has trailing bytes");

  try {
    RotorPolicy policy = RotorPolicy::parse(desc, d);
    return AggState::restore(std::move(policy), sites, total, visits);
  } catch (const SnapshotError&) {
    throw;
  } catch (const std::exception& e) {
    throw SnapshotError(std::string("snapshot is inconsistent: ") + e.what());
  }
}

void write_snapshot(const AggState& s, const std::string& path) {
  const auto bytes = encode_snapshot(s);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

AggState read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("cannot open snapshot " + path);
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

}  // namespace rotorlab
