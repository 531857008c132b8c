#include "diffsr/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace diffsr {

namespace {
constexpr char kMagic[8] = {'U', 'D', 'M', 'C', 'K', 'P', 'T', '1'};
}

void Checkpoint::validate() const {
    model.validate();
    if (params.size() != toy_udm_layout(model).total)
        throw std::invalid_argument("Checkpoint: parameter blob size mismatch");
    if (sample_rate <= 0) throw std::invalid_argument("Checkpoint: sample_rate must be positive");
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
    ckpt.validate();
    const auto layout = toy_udm_layout(ckpt.model);
    nlohmann::json header;
    header["model"] = {{"residual_layers", ckpt.model.residual_layers},
                       {"channels", ckpt.model.channels},
                       {"dilation_cycle", ckpt.model.dilation_cycle},
                       {"kernel_size", ckpt.model.kernel_size},
                       {"embed_dim", ckpt.model.embed_dim}};
    header["schedule"] = {{"delta_max", ckpt.endpoints.delta_max},
                          {"delta_min", ckpt.endpoints.delta_min}};
    header["sample_rate"] = ckpt.sample_rate;
    header["ema"] = ckpt.ema;
    nlohmann::json tensors = nlohmann::json::array();
    for (const auto& t : layout.tensors)
        tensors.push_back({{"name", t.name}, {"shape", t.shape}, {"offset", t.offset},
                           {"size", t.size}});
    header["tensors"] = tensors;
    if (!ckpt.train_config_json.empty())
        header["train_config"] = nlohmann::json::parse(ckpt.train_config_json);

    const std::string hs = header.dump();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("save_checkpoint: cannot open " + path);
    f.write(kMagic, 8);
    const std::uint32_t hlen = static_cast<std::uint32_t>(hs.size());
    unsigned char lenb[4] = {static_cast<unsigned char>(hlen & 0xff),
                             static_cast<unsigned char>((hlen >> 8) & 0xff),
                             static_cast<unsigned char>((hlen >> 16) & 0xff),
                             static_cast<unsigned char>((hlen >> 24) & 0xff)};
    f.write(reinterpret_cast<const char*>(lenb), 4);
    f.write(hs.data(), static_cast<std::streamsize>(hs.size()));
    f.write(reinterpret_cast<const char*>(ckpt.params.data()),
            static_cast<std::streamsize>(ckpt.params.size() * sizeof(float)));
    if (!f) throw std::runtime_error("save_checkpoint: write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("load_checkpoint: cannot open " + path);
    char magic[8];
    f.read(magic, 8);
    if (!f || std::memcmp(magic, kMagic, 8) != 0)
        throw std::invalid_argument("load_checkpoint: bad magic in " + path);
    unsigned char lenb[4];
    f.read(reinterpret_cast<char*>(lenb), 4);
    if (!f) throw std::invalid_argument("load_checkpoint: truncated header length");
    const std::uint32_t hlen = lenb[0] | (lenb[1] << 8) | (lenb[2] << 16) |
                               (static_cast<std::uint32_t>(lenb[3]) << 24);
    std::string hs(hlen, '\0');
    f.read(hs.data(), hlen);
    if (!f) throw std::invalid_argument("load_checkpoint: truncated header");
    nlohmann::json header = nlohmann::json::parse(hs);

    Checkpoint ckpt;
    const auto& m = header.at("model");
    ckpt.model.residual_layers = m.at("residual_layers").get<int>();
    ckpt.model.channels = m.at("channels").get<int>();
    ckpt.model.dilation_cycle = m.at("dilation_cycle").get<std::vector<int>>();
    ckpt.model.kernel_size = m.at("kernel_size").get<int>();
    ckpt.model.embed_dim = m.at("embed_dim").get<int>();
    ckpt.endpoints.delta_max = header.at("schedule").at("delta_max").get<double>();
    ckpt.endpoints.delta_min = header.at("schedule").at("delta_min").get<double>();
    ckpt.sample_rate = header.at("sample_rate").get<int>();
    ckpt.ema = header.value("ema", true);
    if (header.contains("train_config")) ckpt.train_config_json = header["train_config"].dump();

    const auto layout = toy_udm_layout(ckpt.model);
    ckpt.params.resize(layout.total);
    f.read(reinterpret_cast<char*>(ckpt.params.data()),
           static_cast<std::streamsize>(layout.total * sizeof(float)));
    if (!f) throw std::invalid_argument("load_checkpoint: truncated parameter blob");
    ckpt.validate();
    return ckpt;
}

}  // namespace diffsr
