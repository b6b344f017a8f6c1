#include "patternpress/column_io.hpp"

#include <fstream>
#include <iterator>

#include "json.hpp"

#include "patternpress/plan.hpp"

namespace patternpress {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path sidecar_path(const fs::path& column_path) {
  auto p = column_path;
  p.replace_extension(".json");
  if (p == column_path) p += ".json";
  return p;
}

Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  Bytes out((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::Io, "read failed: " + path.string());
  return out;
}

void write_file(const fs::path& path, ByteSpan bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

std::string type_name(ElementKind kind) {
  switch (kind) {
    case ElementKind::Int64: return "int64";
    case ElementKind::Float64: return "float64";
    case ElementKind::FixedBytes: return "fixed_bytes";
    case ElementKind::VarBytes: return "var_bytes";
  }
  return "?";
}

ElementKind parse_type_name(std::string_view name) {
  for (auto k : {ElementKind::Int64, ElementKind::Float64, ElementKind::FixedBytes, ElementKind::VarBytes}) {
    if (name == type_name(k)) return k;
  }
  throw Error(ErrorCode::TypeMismatch, "unknown element type '" + std::string(name) + "'");
}

void write_column(const fs::path& path, const TypedColumn& col) {
  write_file(path, raw_stream_bytes(col));
  json side = {{"version", kColumnFormatVersion},
               {"type", type_name(col.type().kind)},
               {"width", col.type().width},
               {"count", col.count()}};
  const auto text = side.dump(2) + "\n";
  write_file(sidecar_path(path), ByteSpan(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

TypedColumn read_column(const fs::path& path) {
  const auto side_bytes = read_file(sidecar_path(path));
  json side;
  try {
    side = json::parse(side_bytes.begin(), side_bytes.end());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, "bad sidecar " + sidecar_path(path).string() + ": " + e.what());
  }
  ElementType type;
  std::uint64_t count = 0;
  try {
    if (side.at("version").get<int>() != kColumnFormatVersion) {
      throw Error(ErrorCode::Io, "unsupported sidecar version in " + sidecar_path(path).string());
    }
    type.kind = parse_type_name(side.at("type").get<std::string>());
    if (type.kind == ElementKind::FixedBytes) type.width = side.at("width").get<std::uint32_t>();
    count = side.at("count").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, "bad sidecar " + sidecar_path(path).string() + ": " + e.what());
  }
  auto data = read_file(path);
  const auto mismatch = [&](const std::string& why) {
    return Error(ErrorCode::TypeMismatch, path.string() + ": " + why);
  };
  try {
    if (type.is_fixed()) {
      if (data.size() != count * type.fixed_width()) throw mismatch("size does not match sidecar count");
      return TypedColumn(type, count, std::move(data));
    }
    const auto head = (count + 1) * 8;
    if (data.size() < head) throw mismatch("too short for its offset array");
    std::vector<std::uint64_t> offsets(count + 1);
    for (std::uint64_t i = 0; i <= count; ++i) offsets[i] = load_le<std::uint64_t>(data.data() + 8 * i);
    Bytes payload(data.begin() + static_cast<std::ptrdiff_t>(head), data.end());
    return TypedColumn(type, count, std::move(payload), std::move(offsets));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) throw mismatch(e.what());
    throw;
  }
}

}  // namespace patternpress
