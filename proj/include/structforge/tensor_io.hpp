#pragma once

// ABG1 tensor interchange format.
//
//   bytes 0-3   ASCII "ABG1"
//   u32 LE      layer count L
//   u32 LE      height H
//   u32 LE      width W
//   L*H*W       float32 LE, layer-major, rows bottom to top, columns left to right

#include "structforge/raster.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace structforge {

std::string encode_abg1(const LayerTensor& tensor);

// Throws FormatError on a bad magic, truncated payload or trailing bytes.
LayerTensor decode_abg1(std::string_view bytes);

LayerTensor read_abg1_file(const std::filesystem::path& path);
void write_abg1_file(const std::filesystem::path& path, const LayerTensor& tensor);

// Whole-file helpers shared by the tools.
std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary and renames it into place, so the target is
// either complete or untouched.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace structforge
