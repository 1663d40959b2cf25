#include "structforge/tensor_io.hpp"

#include "structforge/error.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <system_error>

namespace structforge {

namespace {

constexpr std::string_view kMagic = "ABG1";
constexpr std::size_t kHeaderSize = 16;

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

std::uint32_t get_u32(std::string_view bytes, std::size_t offset) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(bytes[offset + i])) << (8 * i);
    return v;
}

}  // namespace

std::string encode_abg1(const LayerTensor& tensor) {
    const auto values = tensor.values();
    std::string out;
    out.reserve(kHeaderSize + values.size() * 4);
    out.append(kMagic);
    put_u32(out, static_cast<std::uint32_t>(tensor.layers()));
    put_u32(out, static_cast<std::uint32_t>(tensor.height()));
    put_u32(out, static_cast<std::uint32_t>(tensor.width()));
    for (float f : values) put_u32(out, std::bit_cast<std::uint32_t>(f));
    return out;
}

LayerTensor decode_abg1(std::string_view bytes) {
    if (bytes.size() < kHeaderSize) {
        throw FormatError("ABG1: header truncated (" + std::to_string(bytes.size()) + " bytes)");
    }
    if (bytes.substr(0, 4) != kMagic) throw FormatError("ABG1: bad magic");
    const std::uint32_t layers = get_u32(bytes, 4);
    const std::uint32_t height = get_u32(bytes, 8);
    const std::uint32_t width = get_u32(bytes, 12);
    constexpr auto kMaxDim = std::uint64_t(std::numeric_limits<int>::max());
    if (layers == 0 || height == 0 || width == 0 || layers > kMaxDim || height > kMaxDim || width > kMaxDim) {
        throw FormatError("ABG1: invalid shape " + std::to_string(layers) + "x" + std::to_string(height) + "x" +
                          std::to_string(width));
    }
    const std::uint64_t count = std::uint64_t(layers) * height * width;
    const std::uint64_t expected = kHeaderSize + count * 4;
    if (bytes.size() != expected) {
        throw FormatError("ABG1: payload is " + std::to_string(bytes.size()) + " bytes, shape requires " +
                          std::to_string(expected));
    }
    LayerTensor tensor(static_cast<int>(layers), static_cast<int>(height), static_cast<int>(width));
    auto values = tensor.values();
    for (std::uint64_t i = 0; i < count; ++i) {
        values[i] = std::bit_cast<float>(get_u32(bytes, kHeaderSize + i * 4));
    }
    return tensor;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw Error("short write to " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

LayerTensor read_abg1_file(const std::filesystem::path& path) {
    try {
        return decode_abg1(read_file(path));
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_abg1_file(const std::filesystem::path& path, const LayerTensor& tensor) {
    write_file_atomic(path, encode_abg1(tensor));
}

}  // namespace structforge
