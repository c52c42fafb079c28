#pragma once

#include <filesystem>

#include "krom/kmd.hpp"
#include "krom/modeselect.hpp"
#include "krom/noise.hpp"
#include "krom/rom.hpp"

namespace krom {

// JSON persistence for the model artifacts. Doubles are emitted by the JSON
// library's shortest-roundtrip formatter, so every load(save(x)) is
// bit-exact. Noise matrices go to sibling CSV files (the snapshot column
// convention with the global index in the t column); the JSON keeps relative
// references to them.

void save_decomposition(const KoopmanDecomposition& d, const std::filesystem::path& path);
KoopmanDecomposition load_decomposition(const std::filesystem::path& path);

void save_rom(const ReducedOrderModel& model, const std::filesystem::path& path);
ReducedOrderModel load_rom(const std::filesystem::path& path);

void save_noise(const NoiseDecomposition& noise, const std::filesystem::path& path);
NoiseDecomposition load_noise(const std::filesystem::path& path);

void save_normality(const NormalityReport& report, const std::filesystem::path& path);
NormalityReport load_normality(const std::filesystem::path& path);

}  // namespace krom
