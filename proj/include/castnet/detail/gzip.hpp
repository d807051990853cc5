#pragma once

#include <array>
#include <istream>
#include <memory>
#include <streambuf>

#include <zlib.h>

#include "castnet/error.hpp"

namespace castnet::detail {

/// Read-only streambuf inflating a gzip (or zlib) stream pulled from another
/// istream. Concatenated gzip members are handled.
class GzipStreambuf : public std::streambuf {
public:
    explicit GzipStreambuf(std::istream& source) : source_(source) {
        zs_.zalloc = Z_NULL;
        zs_.zfree = Z_NULL;
        zs_.opaque = Z_NULL;
        zs_.avail_in = 0;
        zs_.next_in = Z_NULL;
        // 15 + 32: auto-detect gzip/zlib header
        if (inflateInit2(&zs_, 15 + 32) != Z_OK) throw Error(ErrorCode::Io, "inflateInit2 failed");
        setg(out_.data(), out_.data(), out_.data());
    }
    ~GzipStreambuf() override { inflateEnd(&zs_); }

    GzipStreambuf(const GzipStreambuf&) = delete;
    GzipStreambuf& operator=(const GzipStreambuf&) = delete;

protected:
    int_type underflow() override {
        if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
        while (!finished_) {
            if (zs_.avail_in == 0) {
                source_.read(in_.data(), static_cast<std::streamsize>(in_.size()));
                const auto got = source_.gcount();
                if (got <= 0) {
                    finished_ = true;
                    break;
                }
                zs_.next_in = reinterpret_cast<Bytef*>(in_.data());
                zs_.avail_in = static_cast<uInt>(got);
            }
            zs_.next_out = reinterpret_cast<Bytef*>(out_.data());
            zs_.avail_out = static_cast<uInt>(out_.size());
            const int rc = inflate(&zs_, Z_NO_FLUSH);
            if (rc == Z_STREAM_END) {
                // another member may follow
                if (inflateReset(&zs_) != Z_OK) finished_ = true;
            } else if (rc != Z_OK && rc != Z_BUF_ERROR) {
                throw Error(ErrorCode::Io, "corrupt gzip stream");
            }
            const auto produced = out_.size() - zs_.avail_out;
            if (produced > 0) {
                setg(out_.data(), out_.data(), out_.data() + produced);
                return traits_type::to_int_type(*gptr());
            }
        }
        return traits_type::eof();
    }

private:
    std::istream& source_;
    z_stream zs_{};
    std::array<char, 1 << 16> in_{};
    std::array<char, 1 << 16> out_{};
    bool finished_ = false;
};

/// Owns whatever wrapper is needed to read `source` as plain text.
class TextSource {
public:
    explicit TextSource(std::istream& source) {
        const int c0 = source.peek();
        bool gz = false;
        if (c0 == 0x1f) {
            source.get();
            gz = source.peek() == 0x8b;
            source.unget();
        }
        if (gz) {
            buf_ = std::make_unique<GzipStreambuf>(source);
            owned_ = std::make_unique<std::istream>(buf_.get());
            stream_ = owned_.get();
        } else {
            stream_ = &source;
        }
    }

    std::istream& stream() { return *stream_; }

private:
    std::unique_ptr<GzipStreambuf> buf_;
    std::unique_ptr<std::istream> owned_;
    std::istream* stream_ = nullptr;
};

} // namespace castnet::detail
