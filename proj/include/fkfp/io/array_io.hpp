#pragma once

#include <string>

#include "fkfp/core/field.hpp"
#include "fkfp/solver/solver.hpp"

namespace fkfp::io {

// Flat little-endian float64 array with a fixed 64-byte header:
//   0  magic "FKFPARR\0"
//   8  u32 version (1)
//  12  u16 dimension d, u16 provenance code
//  16  u32 dims[4] (row-major axis lengths, unused = 1)
//  32  f64 time
//  40  f64 Lx
//  48  f64 Lv
//  56  u64 payload count
int provenance_code(const std::string& name);
std::string provenance_name(int code);

void save_field(const std::string& path, const PhaseField& f, double time, int provenance);
PhaseField load_field(const std::string& path, double* time = nullptr, int* provenance = nullptr);

// one file per sample time plus manifest.json (grid metadata, parameters,
// diagnostics, timestamps live here and only here)
void save_trajectory(const std::string& dir, const solver::Trajectory& tr);

}  // namespace fkfp::io
