#include <cstdint>
#include <cstring>

#include <zlib.h>

#include "lcpbridge/error.hpp"
#include "lcpbridge/xlsx.hpp"

namespace lcpbridge::xlsx {

namespace {

constexpr std::uint32_t kLocalHeader = 0x04034b50;
constexpr std::uint32_t kCentralHeader = 0x02014b50;
constexpr std::uint32_t kEndOfCentral = 0x06054b50;
// 1980-01-01 00:00 in DOS format.
constexpr std::uint16_t kDosTime = 0;
constexpr std::uint16_t kDosDate = (0 << 9) | (1 << 5) | 1;

void put16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>(v >> 8));
}

void put32(std::string& out, std::uint32_t v) {
    put16(out, static_cast<std::uint16_t>(v & 0xffff));
    put16(out, static_cast<std::uint16_t>(v >> 16));
}

std::uint16_t get16(std::string_view in, std::size_t at) {
    if (at + 2 > in.size()) throw Error(ErrorCode::MalformedDocument, "truncated zip archive");
    return static_cast<std::uint16_t>(static_cast<unsigned char>(in[at]) |
                                      (static_cast<unsigned char>(in[at + 1]) << 8));
}

std::uint32_t get32(std::string_view in, std::size_t at) {
    return get16(in, at) | (static_cast<std::uint32_t>(get16(in, at + 2)) << 16);
}

std::string deflate_raw(std::string_view data) {
    z_stream zs{};
    if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, -15, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
        throw std::runtime_error("deflateInit2 failed");
    }
    std::string out(deflateBound(&zs, static_cast<uLong>(data.size())), '\0');
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = deflate(&zs, Z_FINISH);
    deflateEnd(&zs);
    if (rc != Z_STREAM_END) throw std::runtime_error("deflate failed");
    out.resize(zs.total_out);
    return out;
}

std::string inflate_raw(std::string_view data, std::size_t expected) {
    z_stream zs{};
    if (inflateInit2(&zs, -15) != Z_OK) throw std::runtime_error("inflateInit2 failed");
    std::string out(expected, '\0');
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = inflate(&zs, Z_FINISH);
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || zs.total_out != expected) {
        throw Error(ErrorCode::MalformedDocument, "corrupt deflate stream in zip archive");
    }
    return out;
}

std::uint32_t crc(std::string_view data) {
    return static_cast<std::uint32_t>(
        crc32(0, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
}

}  // namespace

std::string write_zip(const std::vector<std::pair<std::string, std::string>>& files) {
    std::string out, central;
    for (const auto& [name, data] : files) {
        const auto packed = deflate_raw(data);
        const auto checksum = crc(data);
        const auto offset = static_cast<std::uint32_t>(out.size());

        put32(out, kLocalHeader);
        put16(out, 20);  // version needed
        put16(out, 0);   // flags
        put16(out, 8);   // deflate
        put16(out, kDosTime);
        put16(out, kDosDate);
        put32(out, checksum);
        put32(out, static_cast<std::uint32_t>(packed.size()));
        put32(out, static_cast<std::uint32_t>(data.size()));
        put16(out, static_cast<std::uint16_t>(name.size()));
        put16(out, 0);
        out += name;
        out += packed;

        put32(central, kCentralHeader);
        put16(central, 20);  // version made by
        put16(central, 20);
        put16(central, 0);
        put16(central, 8);
        put16(central, kDosTime);
        put16(central, kDosDate);
        put32(central, checksum);
        put32(central, static_cast<std::uint32_t>(packed.size()));
        put32(central, static_cast<std::uint32_t>(data.size()));
        put16(central, static_cast<std::uint16_t>(name.size()));
        put16(central, 0);  // extra
        put16(central, 0);  // comment
        put16(central, 0);  // disk
        put16(central, 0);  // internal attrs
        put32(central, 0);  // external attrs
        put32(central, offset);
        central += name;
    }
    const auto central_offset = static_cast<std::uint32_t>(out.size());
    out += central;
    put32(out, kEndOfCentral);
    put16(out, 0);
    put16(out, 0);
    put16(out, static_cast<std::uint16_t>(files.size()));
    put16(out, static_cast<std::uint16_t>(files.size()));
    put32(out, static_cast<std::uint32_t>(central.size()));
    put32(out, central_offset);
    put16(out, 0);
    return out;
}

std::map<std::string, std::string> read_zip(std::string_view in) {
    if (in.size() < 22) throw Error(ErrorCode::MalformedDocument, "not a zip archive");
    // The end record sits in the last 22 bytes plus an optional comment.
    std::size_t eocd = std::string_view::npos;
    const std::size_t lowest = in.size() > 22 + 0xffff ? in.size() - 22 - 0xffff : 0;
    for (std::size_t at = in.size() - 22 + 1; at-- > lowest;) {
        if (get32(in, at) == kEndOfCentral) {
            eocd = at;
            break;
        }
    }
    if (eocd == std::string_view::npos) throw Error(ErrorCode::MalformedDocument, "not a zip archive");
    const std::size_t count = get16(in, eocd + 10);
    std::size_t at = get32(in, eocd + 16);

    std::map<std::string, std::string> files;
    for (std::size_t i = 0; i < count; ++i) {
        if (get32(in, at) != kCentralHeader) throw Error(ErrorCode::MalformedDocument, "bad zip central directory");
        const auto method = get16(in, at + 10);
        const auto checksum = get32(in, at + 16);
        const std::size_t packed_size = get32(in, at + 20);
        const std::size_t size = get32(in, at + 24);
        const std::size_t name_len = get16(in, at + 28);
        const std::size_t extra_len = get16(in, at + 30);
        const std::size_t comment_len = get16(in, at + 32);
        const std::size_t local = get32(in, at + 42);
        if (at + 46 + name_len > in.size()) throw Error(ErrorCode::MalformedDocument, "truncated zip archive");
        std::string name(in.substr(at + 46, name_len));
        at += 46 + name_len + extra_len + comment_len;

        if (get32(in, local) != kLocalHeader) throw Error(ErrorCode::MalformedDocument, "bad zip local header");
        const std::size_t data_at = local + 30 + get16(in, local + 26) + get16(in, local + 28);
        if (data_at + packed_size > in.size()) throw Error(ErrorCode::MalformedDocument, "truncated zip entry");
        const auto packed = in.substr(data_at, packed_size);
        std::string data;
        if (method == 0) {
            data = std::string(packed);
        } else if (method == 8) {
            data = inflate_raw(packed, size);
        } else {
            throw Error(ErrorCode::MalformedDocument, "unsupported zip compression method in " + name);
        }
        if (crc(data) != checksum) throw Error(ErrorCode::MalformedDocument, "checksum mismatch in " + name);
        files.emplace(std::move(name), std::move(data));
    }
    return files;
}

}  // namespace lcpbridge::xlsx
