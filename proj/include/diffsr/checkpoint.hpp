#pragma once

#include <string>
#include <vector>

#include "diffsr/schedule.hpp"
#include "diffsr/toy_udm.hpp"

namespace diffsr {

/// On-disk model format: 8-byte magic "UDMCKPT1", uint32 LE header length,
/// UTF-8 JSON header, then the float32 LE parameter blob laid out per the
/// header's tensor index.
struct Checkpoint {
    ToyUdmConfig model;
    ScheduleEndpoints endpoints{10.0, 0.0};
    int sample_rate = 0;
    bool ema = true;
    std::vector<float> params;
    std::string train_config_json;  // optional provenance, verbatim JSON

    void validate() const;
};

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace diffsr
