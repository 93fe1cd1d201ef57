#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "lyz/torus_field.hpp"

namespace lyz {

// Binary field layout: "LYZF", u16 version (1), u8 kind (0 scalar,
// 1 hermitian), u8 n, u32 N, then float64 payload. Little-endian throughout.
inline constexpr std::uint16_t kFieldFormatVersion = 1;

std::string encode_field(const ScalarField& f);
std::string encode_field(const HermitianField& h);

using AnyField = std::variant<ScalarField, HermitianField>;
AnyField decode_field(std::string_view bytes);

void write_field(const std::filesystem::path& path, const ScalarField& f);
void write_field(const std::filesystem::path& path, const HermitianField& h);
AnyField read_field(const std::filesystem::path& path);
ScalarField read_scalar_field(const std::filesystem::path& path);
HermitianField read_hermitian_field(const std::filesystem::path& path);

// Writes to a sibling temporary and renames, so readers never see a partial file.
void atomic_write(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace lyz
