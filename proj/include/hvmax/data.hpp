#pragma once

// Image data handling: IDX (ubyte) files, train/valid/test splits,
// block-mean downsampling, a synthetic digit generator, and salt-and-pepper
// corruption. Images are stored one per row, row-major pixels, values in [0,1].

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hvmax/rng.hpp"

namespace hvmax::data {

using Matrix = Eigen::MatrixXd;

class BadMagic : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TruncatedFile : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct IdxImages {
    Matrix pixels;  // N x (rows*cols)
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
};

struct Dataset {
    Matrix train;
    Matrix valid;
    Matrix test;
    int side = 0;  // images are side x side

    int dim() const { return side * side; }
};

struct SplitCounts {
    int train = 0;
    int valid = 0;
    int test = 0;
};

namespace detail {

inline std::uint32_t read_be32(const unsigned char* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

inline void write_be32(std::ostream& os, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                                static_cast<unsigned char>(v >> 16),
                                static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

}  // namespace detail

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;

/// Parse an IDX3 ubyte image file. Pixels land in [0,1] (byte / 255).
inline IdxImages load_idx_images(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_idx_images: cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 16)
        throw TruncatedFile("load_idx_images: header truncated in " + path.string());
    const std::uint32_t magic = detail::read_be32(bytes.data());
    if (magic != kIdxImageMagic)
        throw BadMagic("load_idx_images: bad magic " + std::to_string(magic) + " in " +
                       path.string());
    IdxImages out;
    const std::uint32_t n = detail::read_be32(bytes.data() + 4);
    out.rows = detail::read_be32(bytes.data() + 8);
    out.cols = detail::read_be32(bytes.data() + 12);
    const std::size_t need =
        16 + std::size_t(n) * out.rows * out.cols;
    if (bytes.size() < need)
        throw TruncatedFile("load_idx_images: payload truncated in " + path.string() +
                            " (have " + std::to_string(bytes.size()) + ", need " +
                            std::to_string(need) + ")");
    const std::size_t d = std::size_t(out.rows) * out.cols;
    out.pixels.resize(n, static_cast<Eigen::Index>(d));
    const unsigned char* px = bytes.data() + 16;
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
            out.pixels(i, static_cast<Eigen::Index>(j)) = px[i * d + j] / 255.0;
    return out;
}

/// Quantize to bytes (round(v*255), clamped) and write IDX3. Used for test
/// fixtures; load(write(m)) is exact when m already sits on the 1/255 grid.
inline void write_idx_images(const std::filesystem::path& path, const Matrix& images,
                             std::uint32_t rows, std::uint32_t cols) {
    if (images.cols() != static_cast<Eigen::Index>(rows) * cols)
        throw std::invalid_argument("write_idx_images: dims do not match matrix width");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_idx_images: cannot open " + path.string());
    detail::write_be32(out, kIdxImageMagic);
    detail::write_be32(out, static_cast<std::uint32_t>(images.rows()));
    detail::write_be32(out, rows);
    detail::write_be32(out, cols);
    for (Eigen::Index i = 0; i < images.rows(); ++i)
        for (Eigen::Index j = 0; j < images.cols(); ++j) {
            const double v = std::clamp(images(i, j), 0.0, 1.0);
            const unsigned char b =
                static_cast<unsigned char>(std::lround(v * 255.0));
            out.write(reinterpret_cast<const char*>(&b), 1);
        }
}

/// Fixed, unshuffled split: first 50000 training-file rows -> train, last
/// 10000 -> valid; the separate test file -> test.
inline Dataset split_mnist(const IdxImages& train_file, const IdxImages& test_file) {
    if (train_file.pixels.rows() != 60000)
        throw std::invalid_argument("split_mnist: training file must hold 60000 images");
    if (test_file.pixels.rows() != 10000)
        throw std::invalid_argument("split_mnist: test file must hold 10000 images");
    if (train_file.rows != train_file.cols)
        throw std::invalid_argument("split_mnist: images must be square");
    if (test_file.rows != train_file.rows || test_file.cols != train_file.cols)
        throw std::invalid_argument("split_mnist: test image size differs");
    Dataset ds;
    ds.side = static_cast<int>(train_file.rows);
    ds.train = train_file.pixels.topRows(50000);
    ds.valid = train_file.pixels.bottomRows(10000);
    ds.test = test_file.pixels;
    return ds;
}

namespace detail {

inline Matrix block_mean(const Matrix& images, int side, int factor) {
    const int nside = side / factor;
    Matrix out(images.rows(), Eigen::Index(nside) * nside);
    for (Eigen::Index i = 0; i < images.rows(); ++i)
        for (int nr = 0; nr < nside; ++nr)
            for (int nc = 0; nc < nside; ++nc) {
                double acc = 0.0;
                for (int fr = 0; fr < factor; ++fr)
                    for (int fc = 0; fc < factor; ++fc)
                        acc += images(i, Eigen::Index(nr * factor + fr) * side +
                                             (nc * factor + fc));
                out(i, Eigen::Index(nr) * nside + nc) = acc / (factor * factor);
            }
    return out;
}

}  // namespace detail

/// Shrink to the first `counts` rows of each split and average factor x factor
/// pixel blocks. factor must divide the image side.
inline Dataset downsample(const Dataset& ds, SplitCounts counts, int factor) {
    if (factor < 1) throw std::invalid_argument("downsample: factor must be >= 1");
    if (ds.side % factor != 0)
        throw std::invalid_argument("downsample: factor " + std::to_string(factor) +
                                    " does not divide side " + std::to_string(ds.side));
    if (counts.train < 1 || counts.valid < 1 || counts.test < 1)
        throw std::invalid_argument("downsample: counts must be positive");
    if (counts.train > ds.train.rows() || counts.valid > ds.valid.rows() ||
        counts.test > ds.test.rows())
        throw std::invalid_argument("downsample: counts exceed available rows");
    Dataset out;
    out.side = ds.side / factor;
    out.train = detail::block_mean(ds.train.topRows(counts.train), ds.side, factor);
    out.valid = detail::block_mean(ds.valid.topRows(counts.valid), ds.side, factor);
    out.test = detail::block_mean(ds.test.topRows(counts.test), ds.side, factor);
    return out;
}

namespace detail {

// seven-segment geometry on the unit square
struct Segment {
    double ax, ay, bx, by;
};

inline constexpr std::array<Segment, 7> kSegments{{
    {0.22, 0.20, 0.78, 0.20},  // A top
    {0.78, 0.20, 0.78, 0.50},  // B upper right
    {0.78, 0.50, 0.78, 0.80},  // C lower right
    {0.22, 0.80, 0.78, 0.80},  // D bottom
    {0.22, 0.50, 0.22, 0.80},  // E lower left
    {0.22, 0.20, 0.22, 0.50},  // F upper left
    {0.22, 0.50, 0.78, 0.50},  // G middle
}};

inline constexpr std::array<const char*, 10> kDigitSegments{
    "ABCDEF", "BC", "ABGED", "ABGCD", "FGBC",
    "AFGCD",  "AFGECD", "ABC", "ABCDEFG", "ABCDFG"};

inline double segment_distance(double px, double py, const Segment& s) {
    const double dx = s.bx - s.ax, dy = s.by - s.ay;
    const double len2 = dx * dx + dy * dy;
    double t = ((px - s.ax) * dx + (py - s.ay) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    const double cx = s.ax + t * dx, cy = s.ay + t * dy;
    return std::hypot(px - cx, py - cy);
}

inline void render_digit(double* row, int side, int digit, double jx, double jy,
                         double thickness, double smoothing) {
    const char* segs = kDigitSegments[static_cast<std::size_t>(digit)];
    for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c) {
            const double x = (c + 0.5) / side - jx;
            const double y = (r + 0.5) / side - jy;
            double dmin = 1e9;
            for (const char* s = segs; *s; ++s)
                dmin = std::min(
                    dmin, segment_distance(x, y, kSegments[std::size_t(*s - 'A')]));
            row[r * side + c] =
                std::clamp((thickness + smoothing - dmin) / smoothing, 0.0, 1.0);
        }
}

inline Matrix synthesize(int count, int side, rng::Stream& stream) {
    constexpr double kSmoothing = 0.025;
    Matrix out(count, Eigen::Index(side) * side);
    std::vector<double> row(static_cast<std::size_t>(side) * side);
    for (int i = 0; i < count; ++i) {
        const int digit = static_cast<int>(stream.below(10));
        const double jx = (stream.uniform() - 0.5) * 0.16;
        const double jy = (stream.uniform() - 0.5) * 0.16;
        const double th = 0.045 + stream.uniform() * 0.055;
        render_digit(row.data(), side, digit, jx, jy, th, kSmoothing);
        for (std::size_t j = 0; j < row.size(); ++j)
            out(i, static_cast<Eigen::Index>(j)) = row[j];
    }
    return out;
}

}  // namespace detail

/// Deterministic stand-in corpus: jittered seven-segment digits rendered as a
/// smoothed distance field. No external files needed.
inline Dataset synthetic_digits(SplitCounts counts, int side, std::uint64_t seed) {
    if (side < 4) throw std::invalid_argument("synthetic_digits: side must be >= 4");
    if (counts.train < 1 || counts.valid < 1 || counts.test < 1)
        throw std::invalid_argument("synthetic_digits: counts must be positive");
    rng::Stream stream(rng::derive_seed(seed, rng::kDataTag));
    Dataset ds;
    ds.side = side;
    ds.train = detail::synthesize(counts.train, side, stream);
    ds.valid = detail::synthesize(counts.valid, side, stream);
    ds.test = detail::synthesize(counts.test, side, stream);
    return ds;
}

/// Salt-and-pepper corruption: each pixel is independently forced to 0 with
/// probability p/2, to 1 with probability p/2, else kept. One uniform draw
/// per pixel in row-major order, so equal streams give equal corruption.
inline Matrix salt_pepper(const Matrix& images, double p, rng::Stream& stream) {
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("salt_pepper: p must lie in [0,1]");
    Matrix out = images;
    for (Eigen::Index i = 0; i < out.rows(); ++i)
        for (Eigen::Index j = 0; j < out.cols(); ++j) {
            const double u = stream.uniform();
            if (u < p / 2.0)
                out(i, j) = 0.0;
            else if (u < p)
                out(i, j) = 1.0;
        }
    return out;
}

}  // namespace hvmax::data
