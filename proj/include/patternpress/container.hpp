#pragma once

#include <array>
#include <cstdint>

#include "patternpress/datamodel.hpp"

namespace patternpress {

inline constexpr std::array<std::uint8_t, 4> kContainerMagic = {0x5A, 0x44, 0x4D, 0x56};  // "ZDMV"
inline constexpr std::uint16_t kContainerVersion = 1;

/// ZDMV container, little-endian throughout:
///
///   magic "ZDMV" | version u16
///   type tag u8 [width u32 when FixedBytes] | original_count u64 | checksum u64
///   codec tree, preorder: tag u8 | params_len u32 | params | child_count u8
///   stream_count u32 | per stream: role u8 | length u64 | bytes
Bytes serialize_artifact(const CompressedArtifact& a);

/// Inverse of serialize_artifact. Errors name the earliest violated field.
CompressedArtifact deserialize_artifact(ByteSpan bytes);

/// Byte length serialize_artifact would produce.
std::size_t compressed_size(const CompressedArtifact& a);

}  // namespace patternpress
