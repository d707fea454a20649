#include "spincond/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace spincond {

namespace {

struct File {
  explicit File(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    f = std::fopen(path.string().c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  ~File() {
    if (f) std::fclose(f);
  }
  void put(const char* s) { std::fputs(s, f); }
  void num(Real v, char sep) { std::fprintf(f, "%.17g%c", v, sep); }
  std::FILE* f = nullptr;
};

}  // namespace

void write_trajectory_csv(const std::filesystem::path& path,
                          const TrajectoryRecord& rec) {
  File out(path);
  out.put("t,fx,fy,fz,vxx,vxy,vxz,vyy,vyz,vzz,clicks_plus_cum,clicks_minus_cum\n");
  for (size_t k = 0; k < rec.size(); ++k) {
    out.num(rec.t[k], ',');
    for (int a = 0; a < 3; ++a) out.num(rec.mean[k](a), ',');
    for (int c = 0; c < kCovEntries; ++c) out.num(rec.cov[k](c), ',');
    out.num(rec.clicks_plus_cum[k], ',');
    out.num(rec.clicks_minus_cum[k], '\n');
  }
}

void write_clicks_csv(const std::filesystem::path& path, const TrajectoryRecord& rec) {
  File out(path);
  out.put("t,port\n");
  for (const auto& c : rec.click_events) {
    out.num(c.time, ',');
    std::fprintf(out.f, "%+d\n", c.port);
  }
}

void write_photocurrent_csv(const std::filesystem::path& path,
                            const PhotocurrentRecord& rec) {
  File out(path);
  out.put("t,dC_plus,dC_minus,dC_diff\n");
  for (size_t k = 0; k < rec.size(); ++k) {
    out.num(rec.t[k], ',');
    out.num(rec.dc_plus[k], ',');
    out.num(rec.dc_minus[k], ',');
    out.num(rec.dc_plus[k] - rec.dc_minus[k], '\n');
  }
}

void write_ensemble_csv(const std::filesystem::path& path, const EnsembleStats& stats) {
  File out(path);
  out.put("t");
  static const char* names[] = {"fx", "fy", "fz", "vxx", "vxy", "vxz",
                                "vyy", "vyz", "vzz", "clicks_plus", "clicks_minus"};
  for (const char* n : names) std::fprintf(out.f, ",%s_mean,%s_var,%s_se", n, n, n);
  out.put("\n");
  for (size_t k = 0; k < stats.t.size(); ++k) {
    out.num(stats.t[k], ',');
    for (int c = 0; c < EnsembleStats::kColumns; ++c) {
      out.num(stats.mean(k, c), ',');
      out.num(stats.variance(k, c), ',');
      out.num(stats.std_error(k, c), c + 1 == EnsembleStats::kColumns ? '\n' : ',');
    }
  }
}

void write_pmf_csv(const std::filesystem::path& path, const PhotocountPmf& pmf) {
  File out(path);
  out.put("c_plus,c_minus,probability\n");
  for (int cp = 0; cp <= pmf.cap_plus(); ++cp)
    for (int cm = 0; cm <= pmf.cap_minus(); ++cm) {
      if (pmf.table(cp, cm) == 0.0) continue;
      std::fprintf(out.f, "%d,%d,", cp, cm);
      out.num(pmf.table(cp, cm), '\n');
    }
}

void write_spectrum_csv(const std::filesystem::path& path, const Periodogram& spec) {
  File out(path);
  out.put("frequency_hz,power\n");
  for (size_t k = 0; k < spec.freq_hz.size(); ++k) {
    out.num(spec.freq_hz[k], ',');
    out.num(spec.power[k], '\n');
  }
}

PhotocurrentRecord read_photocurrent_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,dC_plus,dC_minus", 0) != 0)
    throw std::runtime_error(path.string() + ": not a photocurrent CSV");
  PhotocurrentRecord rec;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    Real vals[3];
    for (int c = 0; c < 3; ++c) {
      if (!std::getline(row, cell, ','))
        throw std::runtime_error(path.string() + ": short row");
      vals[c] = std::stod(cell);
    }
    rec.t.push_back(vals[0]);
    rec.dc_plus.push_back(vals[1]);
    rec.dc_minus.push_back(vals[2]);
  }
  if (rec.t.size() >= 2) rec.bin_dt = rec.t[1] - rec.t[0];
  return rec;
}

}  // namespace spincond
