#pragma once

#include <cstring>
#include <stdexcept>

#include "zkpot/common/bytes.hpp"

namespace zkpot {

struct DeserializeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Little-endian canonical byte writer. All wire formats in this project are
// produced through this class so serialization stays deterministic.
class ByteWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u16(std::uint16_t v) { le(v, 2); }
    void u32(std::uint32_t v) { le(v, 4); }
    void u64(std::uint64_t v) { le(v, 8); }
    void i64(std::int64_t v) { le(static_cast<std::uint64_t>(v), 8); }
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        u64(bits);
    }
    void raw(std::span<const std::uint8_t> data) {
        buf_.insert(buf_.end(), data.begin(), data.end());
    }
    void var_bytes(std::span<const std::uint8_t> data) {
        u32(static_cast<std::uint32_t>(data.size()));
        raw(data);
    }
    void str(std::string_view s) {
        u32(static_cast<std::uint32_t>(s.size()));
        buf_.insert(buf_.end(), s.begin(), s.end());
    }

    const Bytes& bytes() const { return buf_; }
    Bytes take() { return std::move(buf_); }

private:
    void le(std::uint64_t v, int n) {
        for (int i = 0; i < n; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    Bytes buf_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t u8() { return take(1)[0]; }
    std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
    std::uint64_t u64() { return le(8); }
    std::int64_t i64() { return static_cast<std::int64_t>(le(8)); }
    double f64() {
        std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    Bytes raw(std::size_t n) {
        auto s = take(n);
        return Bytes(s.begin(), s.end());
    }
    Bytes var_bytes() {
        std::uint32_t n = u32();
        return raw(n);
    }
    std::string str() {
        std::uint32_t n = u32();
        auto s = take(n);
        return std::string(s.begin(), s.end());
    }
    template <std::size_t N>
    std::array<std::uint8_t, N> fixed() {
        auto s = take(N);
        std::array<std::uint8_t, N> out;
        std::memcpy(out.data(), s.data(), N);
        return out;
    }

    std::size_t remaining() const { return data_.size() - pos_; }
    bool done() const { return remaining() == 0; }
    void expect_done() const {
        if (!done()) throw DeserializeError("trailing bytes in record");
    }

private:
    std::span<const std::uint8_t> take(std::size_t n) {
        if (remaining() < n) throw DeserializeError("record truncated");
        auto s = data_.subspan(pos_, n);
        pos_ += n;
        return s;
    }
    std::uint64_t le(int n) {
        auto s = take(n);
        std::uint64_t v = 0;
        for (int i = n - 1; i >= 0; --i) v = (v << 8) | s[i];
        return v;
    }

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

}  // namespace zkpot
