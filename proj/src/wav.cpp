#include "diffsr/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace diffsr {

namespace {
std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
void push_u32(std::vector<unsigned char>& v, std::uint32_t x) {
    v.push_back(x & 0xff);
    v.push_back((x >> 8) & 0xff);
    v.push_back((x >> 16) & 0xff);
    v.push_back((x >> 24) & 0xff);
}
void push_u16(std::vector<unsigned char>& v, std::uint16_t x) {
    v.push_back(x & 0xff);
    v.push_back((x >> 8) & 0xff);
}
}  // namespace

Waveform read_wav(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("read_wav: cannot open " + path);
    std::vector<unsigned char> data((std::istreambuf_iterator<char>(f)),
                                    std::istreambuf_iterator<char>());
    if (data.size() < 44 || std::memcmp(data.data(), "RIFF", 4) != 0 ||
        std::memcmp(data.data() + 8, "WAVE", 4) != 0)
        throw std::invalid_argument("read_wav: not a RIFF/WAVE file: " + path);

    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    const unsigned char* samples = nullptr;
    std::size_t sample_bytes = 0;

    std::size_t pos = 12;
    while (pos + 8 <= data.size()) {
        const char* id = reinterpret_cast<const char*>(data.data() + pos);
        const std::uint32_t size = read_u32(data.data() + pos + 4);
        const std::size_t body = pos + 8;
        if (body + size > data.size()) break;
        if (std::memcmp(id, "fmt ", 4) == 0 && size >= 16) {
            format = read_u16(data.data() + body);
            channels = read_u16(data.data() + body + 2);
            rate = read_u32(data.data() + body + 4);
            bits = read_u16(data.data() + body + 14);
        } else if (std::memcmp(id, "data", 4) == 0) {
            samples = data.data() + body;
            sample_bytes = size;
        }
        pos = body + size + (size & 1);  // chunks are word-aligned
    }
    if (!samples || rate == 0) throw std::invalid_argument("read_wav: missing fmt/data chunk");
    if (channels != 1) throw std::invalid_argument("read_wav: mono only, got channels=" +
                                                   std::to_string(channels));
    Waveform w;
    w.sample_rate = static_cast<int>(rate);
    if (format == 1 && bits == 16) {
        const std::size_t n = sample_bytes / 2;
        w.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::int16_t s = static_cast<std::int16_t>(samples[2 * i] | (samples[2 * i + 1] << 8));
            w.samples[i] = s / 32768.0;
        }
    } else if (format == 3 && bits == 32) {
        const std::size_t n = sample_bytes / 4;
        w.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::uint32_t u = read_u32(samples + 4 * i);
            float v;
            std::memcpy(&v, &u, 4);
            w.samples[i] = v;
        }
    } else {
        throw std::invalid_argument("read_wav: unsupported encoding (PCM16/float32 only)");
    }
    if (w.samples.empty()) throw std::invalid_argument("read_wav: empty data chunk");
    return w;
}

void write_wav(const std::string& path, const Waveform& w, WavFormat format) {
    w.validate();
    std::vector<unsigned char> out;
    const std::uint32_t n = static_cast<std::uint32_t>(w.samples.size());
    const bool f32 = format == WavFormat::float32;
    const std::uint32_t bytes_per = f32 ? 4 : 2;
    const std::uint32_t data_size = n * bytes_per;
    const std::uint32_t fact_size = f32 ? 12 : 0;
    const std::uint32_t riff_size = 4 + (8 + 16) + fact_size + (8 + data_size);

    out.reserve(riff_size + 8);
    out.insert(out.end(), {'R', 'I', 'F', 'F'});
    push_u32(out, riff_size);
    out.insert(out.end(), {'W', 'A', 'V', 'E'});
    out.insert(out.end(), {'f', 'm', 't', ' '});
    push_u32(out, 16);
    push_u16(out, f32 ? 3 : 1);
    push_u16(out, 1);  // mono
    push_u32(out, static_cast<std::uint32_t>(w.sample_rate));
    push_u32(out, static_cast<std::uint32_t>(w.sample_rate) * bytes_per);
    push_u16(out, static_cast<std::uint16_t>(bytes_per));
    push_u16(out, static_cast<std::uint16_t>(bytes_per * 8));
    if (f32) {
        out.insert(out.end(), {'f', 'a', 'c', 't'});
        push_u32(out, 4);
        push_u32(out, n);
    }
    out.insert(out.end(), {'d', 'a', 't', 'a'});
    push_u32(out, data_size);
    for (double s : w.samples) {
        if (f32) {
            const float v = static_cast<float>(s);
            std::uint32_t u;
            std::memcpy(&u, &v, 4);
            push_u32(out, u);
        } else {
            // symmetric with the /32768 decode so round trips stay within half an LSB
            const int q = std::clamp(static_cast<int>(std::lrint(s * 32768.0)), -32768, 32767);
            push_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
        }
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("write_wav: cannot open " + path);
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!f) throw std::runtime_error("write_wav: write failed: " + path);
}

}  // namespace diffsr
