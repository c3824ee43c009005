// Binary checkpoint of a symmetric-engine state.
//
//   offset  size  field
//   0       8     magic "SANDCUB1"
//   8       4     version (u32) = 1
//   12      4     d (u32)
//   16      8     N (u64)
//   24      8     k (i64)
//   32      8     t (u64)
//   40      8*n   odometer by simplex rank (i64), n = binomial(M + d - 1, d)
//
// All integers little-endian.
#ifndef SANDCUBE_CHECKPOINT_HPP_
#define SANDCUBE_CHECKPOINT_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sandcube/lattice.hpp"

namespace sandcube {

inline constexpr std::string_view kCheckpointMagic{"SANDCUB1", 8};
inline constexpr std::uint32_t kCheckpointVersion = 1;
inline constexpr std::size_t kCheckpointHeaderBytes = 40;

struct Checkpoint {
  CubeSpec spec;
  std::int64_t background = 0;
  std::int64_t t = 0;
  std::vector<std::int64_t> odometer;

  bool operator==(const Checkpoint&) const = default;
};

std::string encode_checkpoint(const Checkpoint& cp);
// CorruptCheckpoint on bad magic, unknown version, bad header values or a
// payload whose length disagrees with (d, N).
Checkpoint decode_checkpoint(std::string_view bytes);

// Writes through a temporary file and renames it into place. IoError on
// failure.
void save_checkpoint(const Checkpoint& cp, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

} // namespace sandcube

#endif
