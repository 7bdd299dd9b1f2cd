#include "parc/fixture.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "parc/random.hpp"

namespace parc {

namespace {

constexpr std::array<char, 5> kMagic{'P', 'A', 'R', 'C', '1'};

template <typename U>
U to_little(U v) {
    if constexpr (std::endian::native == std::endian::big) {
        U r = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i) r |= ((v >> (8 * i)) & 0xff) << (8 * (sizeof(U) - 1 - i));
        return r;
    }
    return v;
}

void put_u32(std::ostream& os, std::uint32_t v) {
    std::array<char, 4> b{};
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b.data(), b.size());
}

std::uint32_t get_u32(std::istream& is) {
    std::array<unsigned char, 4> b{};
    if (!is.read(reinterpret_cast<char*>(b.data()), b.size()))
        throw std::runtime_error("PARC1: truncated header length");
    return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

template <typename T>
using Bits = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;

template <typename T>
Tensor4<T> read_payload(std::istream& is, const Shape& shape) {
    std::vector<T> data(shape.numel());
    for (auto& v : data) {
        Bits<T> raw{};
        if (!is.read(reinterpret_cast<char*>(&raw), sizeof raw))
            throw std::runtime_error("PARC1: truncated payload");
        v = std::bit_cast<T>(to_little(raw));
    }
    return Tensor4<T>(shape, std::move(data));
}

}  // namespace

const char* to_string(Precision p) { return p == Precision::F32 ? "f32" : "f64"; }

Precision parse_precision(const std::string& s) {
    if (s == "f32") return Precision::F32;
    if (s == "f64") return Precision::F64;
    throw std::invalid_argument("unknown precision '" + s + "' (expected f32 or f64)");
}

template <typename T>
void write_parc1(std::ostream& os, const Tensor4<T>& t) {
    const Shape& s = t.shape();
    nlohmann::json header;
    header["dtype"] = sizeof(T) == 4 ? "f32" : "f64";
    header["shape"] = {s.batch, s.channels, s.height, s.width};
    const std::string text = header.dump();
    os.write(kMagic.data(), kMagic.size());
    put_u32(os, static_cast<std::uint32_t>(text.size()));
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (const T v : t.data()) {
        const Bits<T> raw = to_little(std::bit_cast<Bits<T>>(v));
        os.write(reinterpret_cast<const char*>(&raw), sizeof raw);
    }
}

void write_parc1(std::ostream& os, const AnyTensor& t) {
    std::visit([&](const auto& x) { write_parc1(os, x); }, t);
}

void write_parc1(const std::filesystem::path& path, const AnyTensor& t) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    write_parc1(os, t);
    if (!os.flush()) throw std::runtime_error("write failed for '" + path.string() + "'");
}

AnyTensor read_parc1(std::istream& is) {
    std::array<char, 5> magic{};
    if (!is.read(magic.data(), magic.size()) || magic != kMagic)
        throw std::runtime_error("PARC1: bad magic");
    const std::uint32_t len = get_u32(is);
    std::string text(len, '\0');
    if (!is.read(text.data(), len)) throw std::runtime_error("PARC1: truncated JSON header");

    nlohmann::json header;
    try {
        header = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("PARC1: invalid JSON header: ") + e.what());
    }
    if (!header.contains("dtype") || !header.contains("shape") || !header["shape"].is_array() ||
        header["shape"].size() != 4)
        throw std::runtime_error("PARC1: header needs dtype and a 4-element shape");
    std::array<std::size_t, 4> d{};
    for (std::size_t k = 0; k < 4; ++k) {
        const auto& v = header["shape"][k];
        if (!v.is_number_unsigned() || v.get<std::size_t>() == 0)
            throw std::runtime_error("PARC1: shape entries must be positive integers");
        d[k] = v.get<std::size_t>();
    }
    const Shape shape{d[0], d[1], d[2], d[3]};
    const std::string dtype = header["dtype"].get<std::string>();
    if (dtype == "f32") return read_payload<float>(is, shape);
    if (dtype == "f64") return read_payload<double>(is, shape);
    throw std::runtime_error("PARC1: unsupported dtype '" + dtype + "'");
}

AnyTensor read_parc1(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path.string() + "'");
    return read_parc1(is);
}

template <typename T>
Tensor4<T> random_tensor(const Shape& shape, std::uint64_t seed) {
    Tensor4<T> t(shape);
    Xoshiro256ss rng(seed);
    fill_uniform(t.data(), rng);
    return t;
}

template void write_parc1<float>(std::ostream&, const Tensor4<float>&);
template void write_parc1<double>(std::ostream&, const Tensor4<double>&);
template Tensor4<float> random_tensor<float>(const Shape&, std::uint64_t);
template Tensor4<double> random_tensor<double>(const Shape&, std::uint64_t);

}  // namespace parc
