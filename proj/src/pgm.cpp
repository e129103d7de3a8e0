#include "gridloc/pgm.hpp"

#include "gridloc/error.hpp"

#include <cmath>

namespace gridloc {

void write_pgm(std::ostream& out, const GrayImage& image, std::span<const std::string> comments) {
    out << "P5\n";
    for (const std::string& c : comments) out << "# " << c << '\n';
    out << image.cols() << ' ' << image.rows() << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.data()), static_cast<std::streamsize>(image.size()));
}

void write_pgm(std::ostream& out, const BinaryImage& image, std::span<const std::string> comments) {
    const GrayImage gray = image.select(GrayImage::Zero(image.rows(), image.cols()),
                                        GrayImage::Constant(image.rows(), image.cols(), 255));
    write_pgm(out, gray, comments);
}

GrayImage stretch_to_gray(const RealRaster& raster) {
    if (raster.size() == 0) return GrayImage(raster.rows(), raster.cols());
    const double lo = raster.minCoeff(), hi = raster.maxCoeff();
    if (!(hi > lo)) return GrayImage::Zero(raster.rows(), raster.cols());
    return ((raster - lo) * (255.0 / (hi - lo))).round().cast<std::uint8_t>();
}

namespace {

long read_header_int(std::istream& in) {
    for (;;) {
        int c = in.peek();
        if (c == '#') {
            std::string skip;
            std::getline(in, skip);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    long v = -1;
    if (!(in >> v) || v < 0) throw ParseError("malformed PGM header");
    return v;
}

}  // namespace

GrayImage read_pgm(std::istream& in) {
    char magic[2] = {};
    if (!in.read(magic, 2) || magic[0] != 'P' || magic[1] != '5') throw ParseError("not a binary PGM (P5)");
    const long w = read_header_int(in), h = read_header_int(in), maxval = read_header_int(in);
    if (maxval != 255) throw ParseError("only maxval 255 PGM is supported");
    in.get();  // single whitespace before raster
    GrayImage image(h, w);
    if (!in.read(reinterpret_cast<char*>(image.data()), static_cast<std::streamsize>(image.size())))
        throw ParseError("truncated PGM raster");
    return image;
}

BinaryImage read_binary_pgm(std::istream& in) { return read_pgm(in) < std::uint8_t{128}; }

}  // namespace gridloc
