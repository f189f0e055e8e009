#ifndef AKGP_CHECKPOINT_HPP
#define AKGP_CHECKPOINT_HPP

#include <filesystem>
#include <optional>

#include "akgp/gpr.hpp"
#include "akgp/normalizer.hpp"

namespace akgp::gpr {

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
    GPRModel model;
    std::optional<Normalizer> normalizer;
};

/// JSON document holding the kernel name and structure, every parameter in
/// declared order, the noise scale, optional normalization statistics and the
/// training data. Doubles are written with round-trip precision.
void save_checkpoint(const std::filesystem::path& path, const GPRModel& model,
                     const std::optional<Normalizer>& normalizer = std::nullopt);

Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace akgp::gpr

#endif  // AKGP_CHECKPOINT_HPP
