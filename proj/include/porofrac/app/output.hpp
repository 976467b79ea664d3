#pragma once

#include <string>
#include <vector>

#include "porofrac/app/scenarios.hpp"

namespace porofrac::app {

/// Nodal and element fields for one export.
struct FieldSnapshot {
  const fem::Mesh* mesh = nullptr;
  std::vector<Vec2> u;          // nodal displacement
  std::vector<Real> d;          // nodal phase field
  std::vector<Real> m, m_e, m_p, alpha, p, h_mag, w, history;  // element averages
};

FieldSnapshot make_snapshot(const Scenario& sc, const fem::SolutionState& state);

/// Legacy ASCII VTK unstructured grid writer (atomic: temp file + rename).
void export_vtk(const FieldSnapshot& snap, const std::string& path);

/// CSV with a header row; floats printed with 17 significant digits.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Real>> rows;
};
void export_csv(const CsvTable& table, const std::string& path);

/// FNV-1a 64-bit checksum of a file, hex encoded.
std::string file_checksum(const std::string& path);

/// Creates the directory (recursively) if needed.
void ensure_directory(const std::string& dir);

/// Atomic text write: temp file in the same directory, then rename.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace porofrac::app
