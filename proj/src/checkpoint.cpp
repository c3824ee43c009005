#include "sandcube/checkpoint.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "sandcube/error.hpp"

namespace sandcube {

namespace {

template <typename T>
void put_le(std::string& out, T value) {
  auto u = static_cast<std::make_unsigned_t<T>>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i)
    out.push_back(static_cast<char>((u >> (8 * i)) & 0xFF));
}

template <typename T>
T get_le(std::string_view in, std::size_t offset) {
  std::make_unsigned_t<T> u = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    u |= static_cast<std::make_unsigned_t<T>>(static_cast<unsigned char>(in[offset + i])) << (8 * i);
  return static_cast<T>(u);
}

} // namespace

std::string encode_checkpoint(const Checkpoint& cp) {
  if (cp.odometer.size() != simplex_size(cp.spec))
    throw Error(Errc::InvalidArgument, "odometer length does not match " + to_string(cp.spec));
  if (cp.t < 0)
    throw Error(Errc::InvalidArgument, "negative checkpoint time");
  std::string out;
  out.reserve(kCheckpointHeaderBytes + 8 * cp.odometer.size());
  out.append(kCheckpointMagic);
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(cp.spec.dim));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(cp.spec.side));
  put_le<std::int64_t>(out, cp.background);
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(cp.t));
  for (std::int64_t v : cp.odometer)
    put_le<std::int64_t>(out, v);
  return out;
}

Checkpoint decode_checkpoint(std::string_view bytes) {
  if (bytes.size() < kCheckpointHeaderBytes)
    throw Error(Errc::CorruptCheckpoint, "truncated header: " + std::to_string(bytes.size()) + " bytes");
  if (bytes.substr(0, 8) != kCheckpointMagic)
    throw Error(Errc::CorruptCheckpoint, "bad magic");
  const auto version = get_le<std::uint32_t>(bytes, 8);
  if (version != kCheckpointVersion)
    throw Error(Errc::CorruptCheckpoint, "unsupported version " + std::to_string(version) + " (expected " +
                                             std::to_string(kCheckpointVersion) + ")");
  const auto d = get_le<std::uint32_t>(bytes, 12);
  const auto N = get_le<std::uint64_t>(bytes, 16);
  if (d < 1 || d > 1'000'000 || N < 1 || N > (std::uint64_t{1} << 31))
    throw Error(Errc::CorruptCheckpoint, "implausible header d=" + std::to_string(d) + " N=" + std::to_string(N));

  Checkpoint cp;
  cp.spec = CubeSpec::make(static_cast<int>(d), static_cast<std::int64_t>(N));
  cp.background = get_le<std::int64_t>(bytes, 24);
  const auto t = get_le<std::uint64_t>(bytes, 32);
  if (t > static_cast<std::uint64_t>(INT64_MAX))
    throw Error(Errc::CorruptCheckpoint, "time out of range");
  cp.t = static_cast<std::int64_t>(t);

  std::uint64_t n = 0;
  try {
    n = simplex_size(cp.spec);
  } catch (const Error&) {
    throw Error(Errc::CorruptCheckpoint, "simplex size of " + to_string(cp.spec) + " overflows");
  }
  const std::uint64_t payload = bytes.size() - kCheckpointHeaderBytes;
  if (n > payload / 8 || payload != n * 8)
    throw Error(Errc::CorruptCheckpoint, "payload is " + std::to_string(payload) + " bytes, expected " +
                                             std::to_string(n) + " x 8 for " + to_string(cp.spec));
  cp.odometer.resize(n);
  for (std::uint64_t i = 0; i < n; ++i)
    cp.odometer[i] = get_le<std::int64_t>(bytes, kCheckpointHeaderBytes + 8 * i);
  return cp;
}

void save_checkpoint(const Checkpoint& cp, const std::string& path) {
  const std::string bytes = encode_checkpoint(cp);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f)
      throw Error(Errc::IoError, "cannot open " + tmp + " for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    f.flush();
    if (!f)
      throw Error(Errc::IoError, "write to " + tmp + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(Errc::IoError, "cannot move checkpoint into " + path);
  }
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw Error(Errc::IoError, "cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (f.bad())
    throw Error(Errc::IoError, "read from " + path + " failed");
  return decode_checkpoint(bytes);
}

} // namespace sandcube
