#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

#include "sarcd/errors.hpp"
#include "sarcd/raster.hpp"

namespace sarcd {

namespace detail {

// Header tokenizer shared by P2/P5: skips whitespace and # comments.
class PgmScanner {
public:
    PgmScanner(const std::string& data, const std::string& path)
        : data_(data), path_(path) {}

    std::string token() {
        skip();
        std::size_t start = pos_;
        while (pos_ < data_.size() && !std::isspace(static_cast<unsigned char>(data_[pos_])))
            ++pos_;
        if (start == pos_)
            throw MalformedHeaderError(path_ + ": unexpected end of PGM header");
        return data_.substr(start, pos_ - start);
    }

    int number(const char* what) {
        std::string t = token();
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(t, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != t.size())
            throw MalformedHeaderError(path_ + ": bad " + what + " '" + t + "'");
        return v;
    }

    // position just past the single whitespace byte that ends the header
    std::size_t payload_offset() const { return pos_ + 1; }

private:
    void skip() {
        while (pos_ < data_.size()) {
            char c = data_[pos_];
            if (c == '#') {
                while (pos_ < data_.size() && data_[pos_] != '\n')
                    ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    const std::string& data_;
    std::string path_;
    std::size_t pos_ = 0;
};

} // namespace detail

// Reads binary (P5) or ASCII (P2) PGM, maxval up to 65535, values as stored.
inline Raster load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FileNotFoundError(path + ": cannot open");
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    detail::PgmScanner sc(data, path);
    std::string magic = sc.token();
    if (magic != "P5" && magic != "P2")
        throw MalformedHeaderError(path + ": not a PGM (magic '" + magic + "')");
    int w = sc.number("width");
    int h = sc.number("height");
    int maxval = sc.number("maxval");
    if (w <= 0 || h <= 0)
        throw MalformedHeaderError(path + ": non-positive dimensions");
    if (maxval <= 0 || maxval > 65535)
        throw MalformedHeaderError(path + ": maxval out of range");

    Raster r(w, h);
    std::size_t n = r.size();
    if (magic == "P5") {
        std::size_t bytes = maxval < 256 ? 1 : 2;
        std::size_t off = sc.payload_offset();
        if (off + n * bytes > data.size())
            throw TruncatedPayloadError(path + ": payload shorter than declared size");
        const auto* p = reinterpret_cast<const unsigned char*>(data.data()) + off;
        for (std::size_t i = 0; i < n; ++i) {
            if (bytes == 1)
                r.pixels[i] = p[i];
            else
                r.pixels[i] = p[2 * i] * 256 + p[2 * i + 1];
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            int v;
            try {
                v = sc.number("sample");
            } catch (const MalformedHeaderError&) {
                throw TruncatedPayloadError(path + ": fewer samples than declared");
            }
            r.pixels[i] = v;
        }
    }
    return r;
}

// Writes P5 with maxval 255; values must round into [0, 255].
inline void save_pgm(const Raster& r, const std::string& path) {
    std::string payload;
    payload.reserve(r.size());
    for (double v : r.pixels) {
        long iv = std::lround(v);
        if (iv < 0 || iv > 255)
            throw std::invalid_argument("save_pgm: value " + std::to_string(v) +
                                        " outside [0,255] after rounding");
        payload.push_back(static_cast<char>(static_cast<unsigned char>(iv)));
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError(path + ": cannot open for writing");
    out << "P5\n" << r.width << " " << r.height << "\n255\n";
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out)
        throw IoError(path + ": write failed");
}

} // namespace sarcd
