// png.hpp - minimal RGB8 PNG encoder (single IDAT, filter 0) over zlib.
#ifndef TVL_PNG_HPP
#define TVL_PNG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <zlib.h>

#include "tvl/common.hpp"

namespace tvl {

namespace detail {

inline void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v >> 24));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

inline void put_chunk(std::vector<uint8_t>& out, const char type[4],
                      const std::vector<uint8_t>& data) {
    put_u32(out, static_cast<uint32_t>(data.size()));
    size_t crc_start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    uint32_t crc = static_cast<uint32_t>(
        ::crc32(0L, out.data() + crc_start, static_cast<uInt>(out.size() - crc_start)));
    put_u32(out, crc);
}

}  // namespace detail

// rgb is row-major, 3 bytes per pixel, width*height*3 long.
inline std::vector<uint8_t> encode_png(size_t width, size_t height,
                                       const std::vector<uint8_t>& rgb) {
    if (rgb.size() != width * height * 3) throw TvlError("png: pixel buffer size mismatch");

    std::vector<uint8_t> raw;
    raw.reserve((width * 3 + 1) * height);
    for (size_t y = 0; y < height; ++y) {
        raw.push_back(0);  // filter type none
        const uint8_t* row = rgb.data() + y * width * 3;
        raw.insert(raw.end(), row, row + width * 3);
    }
    uLongf bound = ::compressBound(static_cast<uLong>(raw.size()));
    std::vector<uint8_t> compressed(bound);
    if (::compress2(compressed.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 9) !=
        Z_OK)
        throw TvlError("png: zlib compression failed");
    compressed.resize(bound);

    std::vector<uint8_t> out = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    std::vector<uint8_t> ihdr;
    detail::put_u32(ihdr, static_cast<uint32_t>(width));
    detail::put_u32(ihdr, static_cast<uint32_t>(height));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(2);  // color type: truecolor
    ihdr.push_back(0);  // compression
    ihdr.push_back(0);  // filter
    ihdr.push_back(0);  // interlace
    detail::put_chunk(out, "IHDR", ihdr);
    detail::put_chunk(out, "IDAT", compressed);
    detail::put_chunk(out, "IEND", {});
    return out;
}

}  // namespace tvl

#endif  // TVL_PNG_HPP
