#include "modalrepair/mft.hpp"

#include "modalrepair/errors.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

namespace modalrepair::mft {

namespace {

constexpr char kMagic[4] = {'M', 'F', 'T', '1'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

std::uint64_t get_le(const std::uint8_t* p, int n) {
    std::uint64_t v = 0;
    for (int i = n - 1; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

}  // namespace

std::vector<std::uint8_t> encode(const Tensor& t) {
    if (t.order() == 0 || t.order() > 255) throw IoError("MFT supports orders 1..255");
    std::vector<std::uint8_t> out;
    out.reserve(5 + 4 * t.order() + 8 * t.size());
    out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
    out.push_back(static_cast<std::uint8_t>(t.order()));
    for (auto d : t.dims()) {
        if (d > std::numeric_limits<std::uint32_t>::max()) throw IoError("dimension exceeds u32 range");
        put_u32(out, static_cast<std::uint32_t>(d));
    }
    for (double v : t.data()) put_f64(out, v);
    return out;
}

Tensor decode(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 5 || std::memcmp(bytes.data(), kMagic, 4) != 0) throw IoError("not an MFT1 stream");
    const std::size_t order = bytes[4];
    if (order == 0) throw IoError("MFT order must be positive");
    const std::size_t header = 5 + 4 * order;
    if (bytes.size() < header) throw IoError("truncated MFT header");
    Shape dims(order);
    for (std::size_t i = 0; i < order; ++i) dims[i] = get_le(bytes.data() + 5 + 4 * i, 4);
    std::size_t count = 1;
    for (auto d : dims) {
        if (d == 0) throw IoError("MFT dims must be positive");
        count *= d;
    }
    if (bytes.size() != header + 8 * count)
        throw IoError("MFT payload has " + std::to_string(bytes.size() - header) + " bytes, expected " +
                      std::to_string(8 * count));
    std::vector<double> data(count);
    for (std::size_t i = 0; i < count; ++i)
        data[i] = std::bit_cast<double>(get_le(bytes.data() + header + 8 * i, 8));
    return Tensor(std::move(dims), std::move(data));
}

void write(const std::filesystem::path& path, const Tensor& t) {
    const auto bytes = encode(t);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw IoError("failed writing " + path.string());
}

Tensor read(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    try {
        return decode(bytes);
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

void write_csv(std::ostream& os, const Tensor& t) {
    const auto& dims = t.dims();
    std::vector<std::size_t> idx(dims.size(), 0);
    char buf[32];
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
        for (std::size_t i = 0; i < idx.size(); ++i) os << idx[i] << ',';
        const double v = t[flat];
        if (std::isnan(v)) {
            os << "nan\n";
        } else {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            os << buf << '\n';
        }
        for (std::size_t a = idx.size(); a-- > 0;) {
            if (++idx[a] < dims[a]) break;
            idx[a] = 0;
        }
    }
}

void write_csv(const std::filesystem::path& path, const Tensor& t) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    write_csv(os, t);
}

}  // namespace modalrepair::mft
