#pragma once

#include <filesystem>
#include <string>

#include "patternpress/datamodel.hpp"

namespace patternpress {

inline constexpr int kColumnFormatVersion = 1;

/// `path.json` next to `path` with the extension replaced.
std::filesystem::path sidecar_path(const std::filesystem::path& column_path);

/// Writes the payload (VarBytes: offsets then payload) plus the JSON sidecar.
void write_column(const std::filesystem::path& path, const TypedColumn& col);
/// Throws Io or TypeMismatch when the file disagrees with its sidecar.
TypedColumn read_column(const std::filesystem::path& path);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, ByteSpan bytes);

/// "int64", "float64", "fixed_bytes", "var_bytes".
std::string type_name(ElementKind kind);
ElementKind parse_type_name(std::string_view name);

}  // namespace patternpress
