#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "patternpress/codecs/ans.hpp"
#include "patternpress/codecs/bitpack.hpp"
#include "patternpress/datamodel.hpp"

// Single-threaded decoders written as plain loops. They share only the
// parameter records with the library and serve as the oracle in tests and
// the baseline in benchmarks.
namespace patternpress::reference {

std::vector<std::int64_t> bitunpack(ByteSpan packed, const codecs::BitPackParams& params, std::uint64_t n);
std::vector<std::int64_t> prefix_sum(std::span<const std::int64_t> deltas, std::int64_t base);
std::vector<std::int64_t> rle_expand(std::span<const std::int64_t> values, std::span<const std::int64_t> counts);
std::vector<std::int64_t> deltastride_expand(std::span<const std::int64_t> starts,
                                             std::span<const std::int64_t> strides,
                                             std::span<const std::int64_t> counts);
Bytes ans_decode(ByteSpan payload, const codecs::AnsParams& params);

/// Decodes the whole codec tree bottom-up and checks the checksum.
TypedColumn decode(const CompressedArtifact& artifact);

}  // namespace patternpress::reference
