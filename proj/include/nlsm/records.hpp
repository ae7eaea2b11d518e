#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlsm/imethod.hpp"
#include "nlsm/locality.hpp"
#include "nlsm/solver.hpp"
#include "nlsm/strichartz.hpp"

namespace nlsm {

/// 17 significant digits: enough to round-trip any double.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class CsvTable {
 public:
  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  std::size_t rows() const noexcept { return rows_.size(); }
  const std::vector<std::string>& row(std::size_t i) const { return rows_.at(i); }

  /// One formatted cell; numbers use format_double.
  struct Cell {
    std::string text;
    Cell(double x) : text(format_double(x)) {}
    Cell(int x) : text(std::to_string(x)) {}
    Cell(long x) : text(std::to_string(x)) {}
    Cell(std::uint64_t x) : text(std::to_string(x)) {}
    Cell(const std::string& s) : text(escape(s)) {}
    Cell(const char* s) : text(escape(s)) {}
  };

  void add(std::initializer_list<Cell> cells) {
    if (cells.size() != columns_.size())
      throw std::logic_error("CsvTable: row has " + std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(columns_.size()));
    std::vector<std::string> r;
    for (const auto& c : cells) r.push_back(c.text);
    rows_.push_back(std::move(r));
  }

  static std::string escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  }

  std::string str() const {
    std::ostringstream os;
    auto line = [&os](const std::vector<std::string>& v) {
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
      os << '\n';
    };
    line(columns_);
    for (const auto& r : rows_) line(r);
    return os.str();
  }

  void write(const std::filesystem::path& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << str();
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

inline CsvTable energy_table() {
  return CsvTable({"t", "mass", "kinetic", "potential", "modified_energy", "h_s_norm"});
}

inline void add_row(CsvTable& t, double time, const EnergyReport& r) {
  t.add({time, r.mass, r.kinetic, r.potential, r.modified_energy, r.h_s_norm});
}

/// t, mass, energy (unmodified Hamiltonian), modified_energy, h_s_norm.
inline CsvTable trajectory_table(const Trajectory& traj) {
  CsvTable t({"t", "mass", "energy", "modified_energy", "h_s_norm"});
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const auto plain = functionals(traj.states[i]);
    const auto& r = traj.reports.empty() ? plain : traj.reports[i];
    t.add({traj.times[i], plain.mass, plain.modified_energy, r.modified_energy, r.h_s_norm});
  }
  return t;
}

inline CsvTable strichartz_table(const std::vector<StrichartzSample>& samples) {
  CsvTable t({"manifold", "lambda", "N1", "N2", "T", "trial", "measured", "reference", "ratio", "seed"});
  for (const auto& s : samples)
    t.add({to_string(s.manifold), s.lambda, s.N1, s.N2, s.T, s.trial, s.measured, s.reference, s.ratio,
           static_cast<std::uint64_t>(s.seed)});
  return t;
}

inline CsvTable decay_table(const std::vector<DecayRow>& rows) {
  CsvTable t({"manifold", "lambda_cluster", "mu_cluster", "nu", "K", "norm", "prefactor", "seed"});
  for (const auto& r : rows)
    t.add({r.manifold, r.lambda_cluster, r.mu_cluster, r.nu, r.K, r.norm, r.prefactor,
           static_cast<std::uint64_t>(r.seed)});
  return t;
}

}  // namespace nlsm
