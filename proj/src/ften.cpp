#include "fairtrack/ften.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <string>

#include "fairtrack/errors.hpp"
#include "fairtrack/file_util.hpp"

namespace fairtrack {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic = {'F', 'T', 'E', 'N'};
constexpr std::size_t kFixedHeader = 8;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_f32(std::vector<std::uint8_t>& out, double v) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
    put_u32(out, bits);
}

std::vector<std::uint8_t> encode(std::span<const std::uint32_t> dims, std::span<const double> data) {
    std::vector<std::uint8_t> out;
    out.reserve(kFixedHeader + 4 * dims.size() + 4 * data.size());
    for (auto b : kMagic) out.push_back(b);
    out.push_back(kFtenVersion);
    out.push_back(kFtenDtypeF32);
    out.push_back(static_cast<std::uint8_t>(dims.size()));
    out.push_back(0);
    for (auto d : dims) put_u32(out, d);
    for (double v : data) put_f32(out, v);
    return out;
}

}  // namespace

std::vector<std::uint8_t> encode_ften(const Tensor2D& t) {
    const std::array<std::uint32_t, 2> dims = {static_cast<std::uint32_t>(t.height()),
                                               static_cast<std::uint32_t>(t.width())};
    return encode(dims, t.data());
}

std::vector<std::uint8_t> encode_ften(const Tensor3D& t) {
    const std::array<std::uint32_t, 3> dims = {static_cast<std::uint32_t>(t.channels()),
                                               static_cast<std::uint32_t>(t.height()),
                                               static_cast<std::uint32_t>(t.width())};
    return encode(dims, t.data());
}

AnyTensor decode_ften(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kFixedHeader) throw FormatError("FTEN: truncated header", bytes.size());
    if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) throw FormatError("FTEN: bad magic", 0);
    if (bytes[4] != kFtenVersion) throw FormatError("FTEN: unsupported version " + std::to_string(bytes[4]), 4);
    if (bytes[5] != kFtenDtypeF32) throw FormatError("FTEN: unsupported dtype " + std::to_string(bytes[5]), 5);
    const std::size_t ndim = bytes[6];
    if (ndim != 2 && ndim != 3) throw FormatError("FTEN: ndim must be 2 or 3, got " + std::to_string(ndim), 6);
    if (bytes[7] != 0) throw FormatError("FTEN: reserved byte must be 0", 7);

    const std::size_t header = kFixedHeader + 4 * ndim;
    if (bytes.size() < header) throw FormatError("FTEN: truncated dims", bytes.size());

    std::array<std::uint32_t, 3> dims{};
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < ndim; ++i) {
        dims[i] = get_u32(bytes.data() + kFixedHeader + 4 * i);
        if (dims[i] == 0 || dims[i] > 0x7fffffffU) {
            throw FormatError("FTEN: invalid dimension " + std::to_string(dims[i]), kFixedHeader + 4 * i);
        }
        count *= dims[i];
    }
    const std::uint64_t expected = header + 4 * count;
    if (bytes.size() < expected) throw FormatError("FTEN: truncated payload", bytes.size());
    if (bytes.size() > expected) throw FormatError("FTEN: trailing bytes after payload", expected);

    std::vector<double> data(count);
    const std::uint8_t* p = bytes.data() + header;
    for (std::uint64_t i = 0; i < count; ++i, p += 4) {
        data[i] = static_cast<double>(std::bit_cast<float>(get_u32(p)));
    }
    if (ndim == 2) {
        return Tensor2D(static_cast<int>(dims[0]), static_cast<int>(dims[1]), std::move(data));
    }
    return Tensor3D(static_cast<int>(dims[0]), static_cast<int>(dims[1]), static_cast<int>(dims[2]),
                    std::move(data));
}

void write_tensor(const Tensor2D& t, const std::filesystem::path& path) { write_file_atomic(path, encode_ften(t)); }

void write_tensor(const Tensor3D& t, const std::filesystem::path& path) { write_file_atomic(path, encode_ften(t)); }

AnyTensor read_tensor(const std::filesystem::path& path) { return decode_ften(read_file_bytes(path)); }

Tensor2D read_tensor2d(const std::filesystem::path& path) {
    auto any = read_tensor(path);
    if (auto* t = std::get_if<Tensor2D>(&any)) return std::move(*t);
    throw FormatError("FTEN: expected a 2-D tensor in " + path.string(), 6);
}

Tensor3D read_tensor3d(const std::filesystem::path& path) {
    auto any = read_tensor(path);
    if (auto* t = std::get_if<Tensor3D>(&any)) return std::move(*t);
    throw FormatError("FTEN: expected a 3-D tensor in " + path.string(), 6);
}

}  // namespace fairtrack
