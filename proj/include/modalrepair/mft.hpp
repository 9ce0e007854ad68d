#pragma once

#include "modalrepair/tensor.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

// MFT container:
//   bytes 0-3  magic "MFT1"
//   byte  4    order (u8)
//   then `order` dims as little-endian u32
//   then the data as little-endian IEEE-754 f64, row-major. NaN marks a gap.

namespace modalrepair::mft {

std::vector<std::uint8_t> encode(const Tensor& t);
Tensor decode(const std::vector<std::uint8_t>& bytes);

void write(const std::filesystem::path& path, const Tensor& t);
Tensor read(const std::filesystem::path& path);

/// One row per entry: i0,...,i{d-1},value. Gaps are written as "nan".
void write_csv(std::ostream& os, const Tensor& t);
void write_csv(const std::filesystem::path& path, const Tensor& t);

}  // namespace modalrepair::mft
