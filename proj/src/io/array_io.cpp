#include "fkfp/io/array_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

static_assert(std::endian::native == std::endian::little,
              "array files are little-endian; big-endian hosts are unsupported");

namespace fkfp::io {

namespace {

constexpr char kMagic[8] = {'F', 'K', 'F', 'P', 'A', 'R', 'R', '\0'};

struct Header {
  char magic[8];
  std::uint32_t version;
  std::uint16_t d;
  std::uint16_t provenance;
  std::uint32_t dims[4];
  double time;
  double Lx;
  double Lv;
  std::uint64_t count;
};
static_assert(sizeof(Header) == 64, "array header must be exactly 64 bytes");

}  // namespace

int provenance_code(const std::string& name) {
  if (name == "linear") return 1;
  if (name.rfind("picard", 0) == 0) return 2;
  if (name == "splitting") return 3;
  if (name == "fourier-ode") return 4;
  return 0;
}

std::string provenance_name(int code) {
  switch (code) {
    case 1: return "linear";
    case 2: return "picard";
    case 3: return "splitting";
    case 4: return "fourier-ode";
    default: return "generic";
  }
}

void save_field(const std::string& path, const PhaseField& f, double time, int provenance) {
  const TorusGrid& g = *f.grid;
  Header h{};
  std::memcpy(h.magic, kMagic, 8);
  h.version = 1;
  h.d = static_cast<std::uint16_t>(g.dim());
  h.provenance = static_cast<std::uint16_t>(provenance);
  for (int a = 0; a < 4; ++a) h.dims[a] = a < g.n_axes() ? static_cast<std::uint32_t>(g.len(a)) : 1u;
  h.time = time;
  h.Lx = g.Lx();
  h.Lv = g.Lv();
  h.count = f.v.size();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write '" + path + "'");
  os.write(reinterpret_cast<const char*>(&h), sizeof h);
  os.write(reinterpret_cast<const char*>(f.v.data()), static_cast<std::streamsize>(f.v.size() * 8));
}

PhaseField load_field(const std::string& path, double* time, int* provenance) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read '" + path + "'");
  Header h{};
  is.read(reinterpret_cast<char*>(&h), sizeof h);
  if (!is || std::memcmp(h.magic, kMagic, 8) != 0)
    throw std::runtime_error("'" + path + "' is not an array file");
  if (h.version != 1) throw std::runtime_error("'" + path + "': unsupported version");
  const int d = h.d;
  const int nx = static_cast<int>(h.dims[0]);
  const int nv = static_cast<int>(h.dims[d]);
  PhaseField f(make_grid(d, nx, nv, h.Lx, h.Lv));
  if (f.v.size() != h.count) throw std::runtime_error("'" + path + "': header/grid size mismatch");
  is.read(reinterpret_cast<char*>(f.v.data()), static_cast<std::streamsize>(h.count * 8));
  if (!is) throw std::runtime_error("'" + path + "': truncated payload");
  if (time) *time = h.time;
  if (provenance) *provenance = h.provenance;
  return f;
}

void save_trajectory(const std::string& dir, const solver::Trajectory& tr) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  nlohmann::ordered_json man;
  man["provenance"] = tr.provenance;
  man["params"] = {{"alpha", tr.params.alpha}, {"beta", tr.params.beta},   {"d", tr.params.d},
                   {"gamma", tr.params.gamma}, {"kappa", tr.params.kappa()}};
  man["grid"] = {{"d", tr.grid->dim()}, {"nx", tr.grid->nx()}, {"nv", tr.grid->nv()},
                 {"Lx", tr.grid->Lx()}, {"Lv", tr.grid->Lv()}};
  auto files = nlohmann::ordered_json::array();
  const int code = provenance_code(tr.provenance);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    char name[64];
    std::snprintf(name, sizeof name, "field_%04zu.fkfp", k);
    save_field(dir + "/" + name, tr.fields[k], tr.times[k], code);
    files.push_back({{"file", name}, {"time", tr.times[k]}, {"mass", tr.mass.empty() ? 0.0 : tr.mass[k]}});
  }
  man["fields"] = files;
  nlohmann::ordered_json diag;
  for (const auto& [k, v] : tr.diagnostics) diag[k] = v;
  man["diagnostics"] = diag;
  std::ofstream os(dir + "/trajectory.json", std::ios::binary);
  if (!os) throw std::runtime_error("cannot write trajectory manifest");
  os << man.dump(2) << "\n";
}

}  // namespace fkfp::io
