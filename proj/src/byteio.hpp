#pragma once

// Little-endian encode/decode helpers shared by the binary dataset and
// reducer container formats.

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include "geoc/error.hpp"

namespace geoc::detail {

class ByteWriter {
public:
    void bytes(std::string_view s) { buf_.insert(buf_.end(), s.begin(), s.end()); }

    template <typename UInt>
    void uint(UInt v) {
        for (std::size_t i = 0; i < sizeof(UInt); ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v) { uint(v); }
    void u64(std::uint64_t v) { uint(v); }
    void i64(std::int64_t v) { uint(static_cast<std::uint64_t>(v)); }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

    const std::vector<char>& data() const { return buf_; }
    std::size_t size() const { return buf_.size(); }

private:
    std::vector<char> buf_;
};

class ByteReader {
public:
    ByteReader(const char* data, std::size_t size, std::string context)
        : data_(data), size_(size), context_(std::move(context)) {}

    std::size_t remaining() const { return size_ - pos_; }
    std::size_t position() const { return pos_; }

    void need(std::size_t n) const {
        if (remaining() < n) throw InputError(context_ + ": truncated data at byte " + std::to_string(pos_));
    }

    std::string_view bytes(std::size_t n) {
        need(n);
        std::string_view v(data_ + pos_, n);
        pos_ += n;
        return v;
    }

    template <typename UInt>
    UInt uint() {
        need(sizeof(UInt));
        UInt v = 0;
        for (std::size_t i = 0; i < sizeof(UInt); ++i)
            v |= static_cast<UInt>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += sizeof(UInt);
        return v;
    }
    std::uint8_t u8() { return uint<std::uint8_t>(); }
    std::uint32_t u32() { return uint<std::uint32_t>(); }
    std::uint64_t u64() { return uint<std::uint64_t>(); }
    std::int64_t i64() { return static_cast<std::int64_t>(uint<std::uint64_t>()); }
    float f32() { return std::bit_cast<float>(u32()); }
    double f64() { return std::bit_cast<double>(u64()); }

    const std::string& context() const { return context_; }

private:
    const char* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
    std::string context_;
};

std::vector<char> read_file(const std::string& path);
void write_file(const std::string& path, const std::vector<char>& data);

}  // namespace geoc::detail
