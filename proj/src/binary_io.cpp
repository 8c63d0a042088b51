#include "binary_io.hpp"

#include <fcntl.h>
#include <unistd.h>
#include <zlib.h>

#include <algorithm>
#include <cerrno>
#include <fstream>

namespace embanks::detail {
namespace {

std::uint32_t crc_of(std::span<const std::uint8_t> bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    std::size_t done = 0;
    while (done < bytes.size()) {
        const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - done, 1u << 30));
        crc = crc32(crc, bytes.data() + done, chunk);
        done += chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

std::uint32_t load_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

std::uint64_t load_u64(const std::uint8_t* p) {
    return static_cast<std::uint64_t>(load_u32(p)) | static_cast<std::uint64_t>(load_u32(p + 4)) << 32;
}

}  // namespace

BinaryWriter::BinaryWriter(const char (&magic)[5], std::uint32_t flags) {
    buf_.insert(buf_.end(), magic, magic + 4);
    put(kFormatVersion);
    put(flags);
    put(std::uint64_t{0});
}

void BinaryWriter::put_string(const std::string& s) {
    put(static_cast<std::uint32_t>(s.size()));
    buf_.insert(buf_.end(), s.begin(), s.end());
}

std::vector<std::uint8_t> BinaryWriter::finish() {
    const std::uint64_t total = buf_.size() + 4;
    for (int i = 0; i < 8; ++i) buf_[12 + i] = static_cast<std::uint8_t>(total >> (8 * i));
    put(crc_of(buf_));
    return std::move(buf_);
}

BinaryReader::BinaryReader(std::span<const std::uint8_t> bytes, const char (&magic)[5],
                           std::filesystem::path where)
    : bytes_(bytes), where_(std::move(where)) {
    if (bytes.size() < 4) throw StoreError(StoreErrorKind::truncated, where_, "file too short");
    if (!std::equal(magic, magic + 4, bytes.begin()))
        throw StoreError(StoreErrorKind::bad_magic, where_, std::string("expected magic ") + magic);
    if (bytes.size() < kHeaderBytes + 4) throw StoreError(StoreErrorKind::truncated, where_, "header truncated");
    const auto version = load_u32(bytes.data() + 4);
    if (version != kFormatVersion)
        throw StoreError(StoreErrorKind::version_mismatch, where_,
                         "format version " + std::to_string(version) + ", expected " +
                             std::to_string(kFormatVersion));
    flags_ = load_u32(bytes.data() + 8);
    const auto total = load_u64(bytes.data() + 12);
    if (bytes.size() < total)
        throw StoreError(StoreErrorKind::truncated, where_,
                         "holds " + std::to_string(bytes.size()) + " of " + std::to_string(total) + " bytes");
    if (bytes.size() != total || total < kHeaderBytes + 4)
        throw StoreError(StoreErrorKind::checksum, where_, "length field does not match file size");
    end_ = bytes.size() - 4;
    if (crc_of(bytes.first(end_)) != load_u32(bytes.data() + end_))
        throw StoreError(StoreErrorKind::checksum, where_, "CRC32 mismatch");
}

std::string BinaryReader::get_string() {
    const auto n = get<std::uint32_t>();
    need(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
}

void BinaryReader::need(std::uint64_t n) const {
    if (n > end_ - pos_) throw StoreError(StoreErrorKind::truncated, where_, "payload ends early");
}

void BinaryReader::expect_end() const {
    if (pos_ != end_) throw StoreError(StoreErrorKind::checksum, where_, "trailing bytes in payload");
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StoreError(StoreErrorKind::missing, path, "cannot open");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw StoreError(StoreErrorKind::io, path, "read failed");
    return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd < 0) throw StoreError(StoreErrorKind::io, path, std::string("open: ") + std::strerror(errno));
    std::size_t done = 0;
    while (done < bytes.size()) {
        const auto n = ::write(fd, bytes.data() + done, bytes.size() - done);
        if (n < 0) {
            if (errno == EINTR) continue;
            const std::string err = std::strerror(errno);
            ::close(fd);
            throw StoreError(StoreErrorKind::io, path, "write: " + err);
        }
        done += static_cast<std::size_t>(n);
    }
    if (::fsync(fd) != 0) {
        const std::string err = std::strerror(errno);
        ::close(fd);
        throw StoreError(StoreErrorKind::io, path, "fsync: " + err);
    }
    if (::close(fd) != 0) throw StoreError(StoreErrorKind::io, path, std::string("close: ") + std::strerror(errno));
}

}  // namespace embanks::detail
