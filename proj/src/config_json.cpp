#include "diffsr/config_json.hpp"

#include <algorithm>
#include <stdexcept>

namespace diffsr {

nlohmann::json filter_spec_to_json(const FilterSpec& spec) {
    nlohmann::json j;
    j["kind"] = spec.kind_name();
    j["source_rate"] = spec.source_rate;
    j["target_rate"] = spec.target_rate;
    j["cutoff_hz"] = spec.cutoff_hz;
    j["sinc"] = {{"zero_crossings", spec.zero_crossings},
                 {"rolloff", spec.rolloff},
                 {"kaiser_beta", spec.kaiser_beta}};
    j["stft"] = {{"frame_length", spec.stft.frame_length},
                 {"hop", spec.stft.hop},
                 {"window", to_string(spec.stft.window)}};
    j["edge_mode"] = spec.edge_mode == EdgeMode::reflect  ? "reflect"
                     : spec.edge_mode == EdgeMode::zero   ? "zero"
                                                          : "circular";
    return j;
}

FilterSpec filter_spec_from_json(const nlohmann::json& j) {
    require_keys_subset(
        j, {"kind", "source_rate", "target_rate", "cutoff_hz", "sinc", "stft", "edge_mode"},
        "filter");
    FilterSpec spec;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "sinc_kaiser") spec.kind = FilterKind::sinc_kaiser;
    else if (kind == "stft_mask") spec.kind = FilterKind::stft_mask;
    else throw std::invalid_argument("filter: unknown kind " + kind);
    spec.source_rate = j.at("source_rate").get<int>();
    spec.target_rate = j.at("target_rate").get<int>();
    spec.cutoff_hz = std::min(spec.source_rate, spec.target_rate) / 2.0;
    if (j.contains("cutoff_hz")) {
        const double c = j["cutoff_hz"].get<double>();
        if (std::abs(c - spec.cutoff_hz) > 1e-9)
            throw std::invalid_argument("filter: cutoff_hz must be min(l, h)/2");
    }
    if (j.contains("sinc")) {
        const auto& s = j["sinc"];
        require_keys_subset(s, {"zero_crossings", "rolloff", "kaiser_beta"}, "filter.sinc");
        spec.zero_crossings = s.value("zero_crossings", spec.zero_crossings);
        spec.rolloff = s.value("rolloff", spec.rolloff);
        spec.kaiser_beta = s.value("kaiser_beta", spec.kaiser_beta);
    }
    if (j.contains("stft")) {
        const auto& s = j["stft"];
        require_keys_subset(s, {"frame_length", "hop", "window"}, "filter.stft");
        spec.stft.frame_length = s.value("frame_length", spec.stft.frame_length);
        spec.stft.hop = s.value("hop", spec.stft.hop);
        if (s.contains("window")) spec.stft.window = window_from_string(s["window"].get<std::string>());
    }
    if (j.contains("edge_mode")) {
        const std::string m = j["edge_mode"].get<std::string>();
        if (m == "reflect") spec.edge_mode = EdgeMode::reflect;
        else if (m == "zero") spec.edge_mode = EdgeMode::zero;
        else if (m == "circular") spec.edge_mode = EdgeMode::circular;
        else throw std::invalid_argument("filter: unknown edge_mode " + m);
    }
    spec.validate();
    return spec;
}

void require_keys_subset(const nlohmann::json& j, const std::vector<std::string>& allowed,
                         const std::string& context) {
    if (!j.is_object()) throw std::invalid_argument(context + ": expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw std::invalid_argument(context + ": unknown key '" + it.key() + "'");
    }
}

}  // namespace diffsr
