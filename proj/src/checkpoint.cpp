#include "ehd/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include <zlib.h>

#include "ehd/error.hpp"

namespace ehd {

namespace {

constexpr char kMagic[4] = {'E', 'H', 'D', 'S'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 8 + 8;

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
void put(std::vector<unsigned char>& out, T value) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    out.insert(out.end(), buf, buf + sizeof(T));
}

template <typename T>
T get(const unsigned char* p) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, p, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    T value;
    std::memcpy(&value, buf, sizeof(T));
    return value;
}

std::uint32_t crc_of(const unsigned char* data, std::size_t len) {
    uLong crc = crc32(0L, Z_NULL, 0);
    // zlib takes uInt lengths; feed in chunks.
    while (len > 0) {
        const uInt chunk = static_cast<uInt>(std::min<std::size_t>(len, 1u << 30));
        crc = crc32(crc, data, chunk);
        data += chunk;
        len -= chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

std::vector<unsigned char> payload(const State& s) {
    const Grid& g = s.grid();
    std::vector<unsigned char> out;
    out.reserve(kHeaderBytes + 5 * g.size() * 8 + 4);
    out.insert(out.end(), kMagic, kMagic + 4);
    put<std::uint32_t>(out, kCheckpointVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n()));
    put<double>(out, s.t);
    put<std::uint64_t>(out, static_cast<std::uint64_t>(s.step_index));
    for (const RealField* f : {&s.u[0], &s.u[1], &s.u[2], &s.v, &s.w})
        for (double x : f->samples()) put<double>(out, x);
    return out;
}

}  // namespace

std::vector<unsigned char> encode_checkpoint(const State& s) {
    auto out = payload(s);
    put<std::uint32_t>(out, crc_of(out.data(), out.size()));
    return out;
}

std::uint32_t state_checksum(const State& s) {
    const auto p = payload(s);
    return crc_of(p.data(), p.size());
}

State decode_checkpoint(const std::vector<unsigned char>& bytes) {
    auto fail = [](const std::string& why) { throw Error(ErrorCode::Checkpoint, "checkpoint: " + why); };
    if (bytes.size() < kHeaderBytes + 4) fail("file too short");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) fail("bad magic (expected \"EHDS\")");
    const auto version = get<std::uint32_t>(bytes.data() + 4);
    if (version != kCheckpointVersion) fail("unsupported format version " + std::to_string(version));
    const auto n = get<std::uint32_t>(bytes.data() + 8);
    if (n < 8 || n > 4096 || (n & (n - 1)) != 0) fail("invalid grid size " + std::to_string(n));
    const std::size_t count = static_cast<std::size_t>(n) * n * n;
    const std::size_t expected = kHeaderBytes + 5 * count * 8 + 4;
    if (bytes.size() != expected)
        fail("size " + std::to_string(bytes.size()) + " does not match n=" + std::to_string(n) +
             " (expected " + std::to_string(expected) + ")");
    const std::uint32_t stored = get<std::uint32_t>(bytes.data() + expected - 4);
    const std::uint32_t actual = crc_of(bytes.data(), expected - 4);
    if (stored != actual) {
        std::ostringstream msg;
        msg << "CRC mismatch (stored " << std::hex << stored << ", computed " << actual << ")";
        fail(msg.str());
    }

    const Grid g(static_cast<int>(n));
    State s = State::zeros(g);
    s.t = get<double>(bytes.data() + 12);
    s.step_index = static_cast<std::int64_t>(get<std::uint64_t>(bytes.data() + 20));
    const unsigned char* p = bytes.data() + kHeaderBytes;
    for (RealField* f : {&s.u[0], &s.u[1], &s.u[2], &s.v, &s.w})
        for (double& x : f->samples()) {
            x = get<double>(p);
            p += 8;
        }
    return s;
}

void write_checkpoint(const std::filesystem::path& path, const State& s) {
    const auto bytes = encode_checkpoint(s);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

State read_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open checkpoint " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_checkpoint(bytes);
}

}  // namespace ehd
