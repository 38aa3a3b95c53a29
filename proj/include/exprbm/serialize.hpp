#pragma once

#include <string>

#include "exprbm/linalg.hpp"
#include "exprbm/model.hpp"

namespace exprbm {

// Binary model container, magic "EXPRBM01". Little-endian layout:
//   magic[8], u32 n_visible, u32 n_hidden,
//   u32 len + bytes (visible unit name), u32 len + bytes (hidden unit name),
//   u8 visible_mode, u8 hidden_mode,
//   f64 W row-major, f64 b_visible, f64 b_hidden,
//   u32 crc32 of all preceding bytes.
void save_model(const ExpRbmModel& m, const std::string& path);
ExpRbmModel load_model(const std::string& path);

// Binary sample container, magic "EXPSMP01": u32 n_rows, u32 n_cols,
// f64 payload row-major, u32 crc32 of all preceding bytes.
void save_samples(const Matrix& samples, const std::string& path);
Matrix load_samples(const std::string& path);

}  // namespace exprbm
