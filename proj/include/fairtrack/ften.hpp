#pragma once

// FTEN binary tensor files.
//
//   bytes 0-3  magic "FTEN"
//   byte  4    version (1)
//   byte  5    dtype   (1 = float32 little-endian)
//   byte  6    ndim    (2 or 3)
//   byte  7    reserved (0)
//   ndim x u32 LE dims, order [C,] H, W
//   payload, row-major (channel-major for 3-D)
//
// In-memory tensors hold doubles; values are narrowed to float32 on write.

#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "fairtrack/tensor.hpp"

namespace fairtrack {

using AnyTensor = std::variant<Tensor2D, Tensor3D>;

inline constexpr std::uint8_t kFtenVersion = 1;
inline constexpr std::uint8_t kFtenDtypeF32 = 1;

std::vector<std::uint8_t> encode_ften(const Tensor2D& t);
std::vector<std::uint8_t> encode_ften(const Tensor3D& t);

/// Throws FormatError carrying the offending byte offset.
AnyTensor decode_ften(std::span<const std::uint8_t> bytes);

void write_tensor(const Tensor2D& t, const std::filesystem::path& path);
void write_tensor(const Tensor3D& t, const std::filesystem::path& path);

AnyTensor read_tensor(const std::filesystem::path& path);
Tensor2D read_tensor2d(const std::filesystem::path& path);
Tensor3D read_tensor3d(const std::filesystem::path& path);

}  // namespace fairtrack
