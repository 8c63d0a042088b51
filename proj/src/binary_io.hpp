#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "embanks/storage.hpp"

namespace embanks::detail {

/// Fixed header shared by every file: magic, version, flags, total length.
inline constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 8;

class BinaryWriter {
public:
    BinaryWriter(const char (&magic)[5], std::uint32_t flags);

    template <class T>
    void put(T v) {
        static_assert(std::is_arithmetic_v<T>);
        unsigned char raw[sizeof(T)];
        std::memcpy(raw, &v, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
        buf_.insert(buf_.end(), raw, raw + sizeof(T));
    }
    template <class T>
    void put_array(std::span<const T> values) {
        for (const auto& v : values) put(v);
    }
    void put_string(const std::string& s);

    /// Patches the length field, appends the CRC32 and returns the bytes.
    std::vector<std::uint8_t> finish();

private:
    std::vector<std::uint8_t> buf_;
};

class BinaryReader {
public:
    /// Checks magic, version, declared length and CRC32, in that order.
    BinaryReader(std::span<const std::uint8_t> bytes, const char (&magic)[5], std::filesystem::path where);

    template <class T>
    T get() {
        static_assert(std::is_arithmetic_v<T>);
        need(sizeof(T));
        unsigned char raw[sizeof(T)];
        std::memcpy(raw, bytes_.data() + pos_, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
        pos_ += sizeof(T);
        T v;
        std::memcpy(&v, raw, sizeof(T));
        return v;
    }
    template <class T>
    std::vector<T> get_array(std::uint64_t count) {
        need(count * sizeof(T));
        std::vector<T> out(count);
        for (auto& v : out) v = get<T>();
        return out;
    }
    std::string get_string();

    [[nodiscard]] std::uint32_t flags() const noexcept { return flags_; }
    /// Throws unless the payload was consumed exactly.
    void expect_end() const;

private:
    void need(std::uint64_t n) const;

    std::span<const std::uint8_t> bytes_;
    std::filesystem::path where_;
    std::size_t pos_ = kHeaderBytes;
    std::size_t end_ = 0;
    std::uint32_t flags_ = 0;
};

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
/// Writes and fsyncs.
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace embanks::detail
