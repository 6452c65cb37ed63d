#pragma once
// Grayscale images on a d-dimensional voxel box, stored row-major with the
// last axis fastest, plus the voxel-level operations the diagram transforms
// are built from.
//
// Two input formats are supported:
//
//   NDTEXT   line 1: d, line 2: n_1 ... n_d, then prod(n_i) values in
//            row-major order (last axis fastest). '#' starts a comment that
//            runs to the end of the line; whitespace is free-form.
//   PGM      P2 (ASCII) or P5 (binary, maxval <= 255); a PGM of width w and
//            height h loads as a 2-dimensional image with extents (h, w).

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cubedual/common.hpp"

namespace cubedual {

class GrayscaleImage {
public:
    GrayscaleImage(std::vector<int> extents, std::vector<Real> values)
        : extents_(std::move(extents)), values_(std::move(values)) {
        if (extents_.empty())
            throw PreconditionError("image needs at least one axis");
        Index total = 1;
        for (int e : extents_) {
            if (e < 1) throw PreconditionError("image extents must be positive");
            if (total > kMaxVoxels / e) throw PreconditionError("image too large");
            total *= e;
        }
        if (static_cast<Index>(values_.size()) != total)
            throw PreconditionError("value count does not match extents");
        for (Real v : values_)
            if (!std::isfinite(v))
                throw PreconditionError("image values must be finite");
    }

    static GrayscaleImage constant(std::vector<int> extents, Real value) {
        Index total = 1;
        for (int e : extents) total *= std::max(e, 1);
        return GrayscaleImage(std::move(extents),
                              std::vector<Real>(static_cast<std::size_t>(total), value));
    }

    int dimension() const { return static_cast<int>(extents_.size()); }
    const std::vector<int>& extents() const { return extents_; }
    int extent(int axis) const { return extents_[static_cast<std::size_t>(axis)]; }
    Index voxel_count() const { return static_cast<Index>(values_.size()); }
    const std::vector<Real>& values() const { return values_; }
    Real operator[](Index flat) const { return values_[static_cast<std::size_t>(flat)]; }

    /// Row-major flat index, last axis fastest.
    Index flat_index(std::span<const int> coords) const {
        Index flat = 0;
        for (int a = 0; a < dimension(); ++a)
            flat = flat * extents_[static_cast<std::size_t>(a)] + coords[static_cast<std::size_t>(a)];
        return flat;
    }

    Real at(std::span<const int> coords) const {
        return values_[static_cast<std::size_t>(flat_index(coords))];
    }

private:
    static constexpr Index kMaxVoxels = Index(1) << 40;

    std::vector<int> extents_;
    std::vector<Real> values_;
};

inline Real min_value(const GrayscaleImage& img) {
    return *std::min_element(img.values().begin(), img.values().end());
}

inline Real max_value(const GrayscaleImage& img) {
    return *std::max_element(img.values().begin(), img.values().end());
}

/// Surrounds the image with a one-voxel shell holding `shell_value`, which
/// must exceed every voxel value already present.
inline GrayscaleImage pad(const GrayscaleImage& img, Real shell_value) {
    if (!(shell_value > max_value(img)))
        throw PreconditionError("pad: shell value must exceed the image maximum");
    const int d = img.dimension();
    std::vector<int> out_extents(static_cast<std::size_t>(d));
    Index total = 1;
    for (int a = 0; a < d; ++a) {
        out_extents[static_cast<std::size_t>(a)] = img.extent(a) + 2;
        total *= img.extent(a) + 2;
    }
    std::vector<Real> out(static_cast<std::size_t>(total), shell_value);
    std::vector<int> coords(static_cast<std::size_t>(d), 0);
    for (Index src = 0; src < img.voxel_count(); ++src) {
        Index dst = 0;
        for (int a = 0; a < d; ++a)
            dst = dst * out_extents[static_cast<std::size_t>(a)] + coords[static_cast<std::size_t>(a)] + 1;
        out[static_cast<std::size_t>(dst)] = img[src];
        for (int a = d - 1; a >= 0; --a) {  // odometer, last axis fastest
            if (++coords[static_cast<std::size_t>(a)] < img.extent(a)) break;
            coords[static_cast<std::size_t>(a)] = 0;
        }
    }
    return GrayscaleImage(std::move(out_extents), std::move(out));
}

/// Voxelwise sign flip. Involution; zero stays +0.0.
inline GrayscaleImage negate(const GrayscaleImage& img) {
    std::vector<Real> out(img.values().size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = negated_value(img.values()[i]);
    return GrayscaleImage(img.extents(), std::move(out));
}

namespace detail {

/// Cursor over a text buffer that treats whitespace and '#'-to-end-of-line
/// comments as token separators.
struct TextScanner {
    std::string_view text;
    std::size_t pos = 0;

    void skip_separators() {
        while (pos < text.size()) {
            char c = text[pos];
            if (c == '#') {
                while (pos < text.size() && text[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos;
            } else {
                break;
            }
        }
    }

    bool at_end() {
        skip_separators();
        return pos >= text.size();
    }

    std::pair<std::size_t, std::string_view> next_token(const char* expected) {
        skip_separators();
        if (pos >= text.size())
            throw ParseError(pos, std::string("unexpected end of input, expected ") + expected);
        std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != '#')
            ++pos;
        return {start, text.substr(start, pos - start)};
    }

    long long next_integer(const char* expected) {
        auto [off, tok] = next_token(expected);
        long long v = 0;
        if (!parse_integer(tok, v))
            throw ParseError(off, std::string("malformed ") + expected + " '" + std::string(tok) + "'");
        return v;
    }
};

}  // namespace detail

inline GrayscaleImage load_ndtext(std::istream& in) {
    const std::string data = detail::slurp(in);
    detail::TextScanner sc{data};

    auto [d_off, d_tok] = sc.next_token("dimension");
    long long d = 0;
    if (!parse_integer(d_tok, d) || d < 1 || d > 16)
        throw ParseError(d_off, "malformed header: dimension must be an integer in [1,16]");

    std::vector<int> extents;
    Index total = 1;
    for (long long a = 0; a < d; ++a) {
        auto [e_off, e_tok] = sc.next_token("axis extent");
        long long e = 0;
        if (!parse_integer(e_tok, e) || e < 1)
            throw ParseError(e_off, "malformed header: axis extent must be a positive integer");
        if (total > (Index(1) << 40) / e) throw ParseError(e_off, "malformed header: image too large");
        total *= e;
        extents.push_back(static_cast<int>(e));
    }

    std::vector<Real> values;
    values.reserve(static_cast<std::size_t>(total));
    for (Index i = 0; i < total; ++i) {
        if (sc.at_end())
            throw ParseError(sc.pos, "value count mismatch: expected " + std::to_string(total) +
                                         " values, got " + std::to_string(i));
        auto [v_off, v_tok] = sc.next_token("voxel value");
        Real v = 0;
        if (!parse_real(v_tok, v))
            throw ParseError(v_off, "malformed voxel value '" + std::string(v_tok) + "'");
        if (!std::isfinite(v)) throw ParseError(v_off, "non-finite voxel value");
        values.push_back(v);
    }
    if (!sc.at_end()) throw ParseError(sc.pos, "value count mismatch: trailing data");

    return GrayscaleImage(std::move(extents), std::move(values));
}

inline GrayscaleImage load_pgm(std::istream& in) {
    const std::string data = detail::slurp(in);
    if (data.size() < 2 || data[0] != 'P' || (data[1] != '2' && data[1] != '5'))
        throw ParseError(0, "not a PGM stream (expected P2 or P5)");
    const bool binary = data[1] == '5';

    detail::TextScanner sc{data, 2};
    long long width = sc.next_integer("width");
    long long height = sc.next_integer("height");
    long long maxval = sc.next_integer("maxval");
    if (width < 1 || height < 1)
        throw ParseError(2, "malformed header: PGM extents must be positive");
    if (maxval < 1 || maxval > 65535) throw ParseError(2, "malformed header: bad maxval");

    const Index total = static_cast<Index>(width) * height;
    std::vector<Real> values;
    values.reserve(static_cast<std::size_t>(total));

    if (binary) {
        if (maxval > 255) throw ParseError(2, "P5 with maxval above 255 is not supported");
        std::size_t raster = sc.pos + 1;  // single whitespace byte after maxval
        if (raster > data.size() || !std::isspace(static_cast<unsigned char>(data[sc.pos])))
            throw ParseError(sc.pos, "expected whitespace before P5 raster");
        if (data.size() < raster + static_cast<std::size_t>(total))
            throw ParseError(data.size(), "value count mismatch: truncated P5 raster");
        for (Index i = 0; i < total; ++i)
            values.push_back(static_cast<Real>(static_cast<unsigned char>(data[raster + static_cast<std::size_t>(i)])));
        for (std::size_t p = raster + static_cast<std::size_t>(total); p < data.size(); ++p)
            if (!std::isspace(static_cast<unsigned char>(data[p])))
                throw ParseError(p, "value count mismatch: trailing data");
    } else {
        for (Index i = 0; i < total; ++i) {
            long long v = sc.next_integer("pixel value");
            if (v < 0 || v > maxval) throw ParseError(sc.pos, "pixel value out of range");
            values.push_back(static_cast<Real>(v));
        }
        if (!sc.at_end()) throw ParseError(sc.pos, "value count mismatch: trailing data");
    }

    return GrayscaleImage({static_cast<int>(height), static_cast<int>(width)}, std::move(values));
}

enum class ImageFormat { ndtext, pgm };

inline GrayscaleImage load_image(std::istream& in, ImageFormat format) {
    return format == ImageFormat::ndtext ? load_ndtext(in) : load_pgm(in);
}

inline void save_ndtext(const GrayscaleImage& img, std::ostream& out) {
    out << img.dimension() << '\n';
    for (int a = 0; a < img.dimension(); ++a) out << (a ? " " : "") << img.extent(a);
    out << '\n';
    const int row = img.extent(img.dimension() - 1);
    for (Index i = 0; i < img.voxel_count(); ++i) {
        out << format_real(img[i]);
        out << ((i % row == row - 1) ? '\n' : ' ');
    }
}

}  // namespace cubedual
