#include "porofrac/app/output.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace porofrac::app {

namespace fs = std::filesystem;
using namespace fem;

FieldSnapshot make_snapshot(const Scenario& sc, const SolutionState& state) {
  const Mesh& mesh = sc.mesh;
  FieldSnapshot snap;
  snap.mesh = &mesh;
  snap.u.resize(mesh.num_nodes());
  snap.d.resize(mesh.num_nodes());
  for (int n = 0; n < mesh.num_nodes(); ++n) {
    snap.u[n] = state.u.segment<2>(sc.dofs.u_dof(n, 0));
    snap.d[n] = state.d[n];
  }

  const int ne = mesh.num_elems();
  snap.m.resize(ne);
  snap.m_e.resize(ne);
  snap.m_p.resize(ne);
  snap.alpha.resize(ne);
  snap.p.resize(ne);
  snap.h_mag.resize(ne);
  snap.w.resize(ne);
  snap.history.resize(ne);
  for (int e = 0; e < ne; ++e) {
    Real m = 0, me = 0, mp = 0, al = 0, pr = 0, w = 0, hh = 0;
    for (int qp = 0; qp < 4; ++qp) {
      const PointState& pt = state.points[e][qp];
      m += pt.m;
      me += pt.m_e();
      mp += pt.m_p;
      al += pt.alpha;
      pr += fluid_pressure(pt.eps_e(), pt.m_e(), sc.material);
      w += fracture_opening(pt.eps, pt.grad_d, mesh.char_length[e]);
      hh += pt.history_H;
    }
    snap.m[e] = m / 4;
    snap.m_e[e] = me / 4;
    snap.m_p[e] = mp / 4;
    snap.alpha[e] = al / 4;
    snap.p[e] = pr / 4;
    snap.w[e] = w / 4;
    snap.history[e] = hh / 4;

    // flux magnitude at the element center
    const RT0Basis rt = rt0_basis(mesh, e, Vec2::Zero());
    Vec2 h = Vec2::Zero();
    for (int s = 0; s < 4; ++s) h += rt.values.col(s) * state.q[sc.dofs.elem_flux_dof[e][s]];
    snap.h_mag[e] = h.norm();
  }
  return snap;
}

namespace {

void print_real(std::ostream& os, Real v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  os << buf;
}

void scalar_section(std::ostream& os, const std::string& name, const std::vector<Real>& v) {
  os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (Real x : v) {
    print_real(os, x);
    os << "\n";
  }
}

}  // namespace

void export_vtk(const FieldSnapshot& snap, const std::string& path) {
  if (!snap.mesh || snap.mesh->num_nodes() == 0)
    throw IoError("export_vtk: empty mesh for " + path);
  const Mesh& mesh = *snap.mesh;

  std::ostringstream os;
  os << "# vtk DataFile Version 3.0\nporofrac fields\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << mesh.num_nodes() << " double\n";
  for (const Vec2& x : mesh.nodes) {
    print_real(os, x.x());
    os << " ";
    print_real(os, x.y());
    os << " 0\n";
  }
  os << "CELLS " << mesh.num_elems() << " " << 5 * mesh.num_elems() << "\n";
  for (const auto& qd : mesh.quads)
    os << "4 " << qd[0] << " " << qd[1] << " " << qd[2] << " " << qd[3] << "\n";
  os << "CELL_TYPES " << mesh.num_elems() << "\n";
  for (int e = 0; e < mesh.num_elems(); ++e) os << "9\n";

  os << "POINT_DATA " << mesh.num_nodes() << "\n";
  os << "VECTORS u double\n";
  for (const Vec2& u : snap.u) {
    print_real(os, u.x());
    os << " ";
    print_real(os, u.y());
    os << " 0\n";
  }
  scalar_section(os, "d", snap.d);

  os << "CELL_DATA " << mesh.num_elems() << "\n";
  scalar_section(os, "m", snap.m);
  scalar_section(os, "m_e", snap.m_e);
  scalar_section(os, "m_p", snap.m_p);
  scalar_section(os, "alpha", snap.alpha);
  scalar_section(os, "p", snap.p);
  scalar_section(os, "h_mag", snap.h_mag);
  scalar_section(os, "w", snap.w);
  scalar_section(os, "H", snap.history);

  atomic_write(path, os.str());
}

void export_csv(const CsvTable& table, const std::string& path) {
  std::ostringstream os;
  for (size_t c = 0; c < table.columns.size(); ++c)
    os << table.columns[c] << (c + 1 < table.columns.size() ? "," : "\n");
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw IoError("export_csv: ragged row for " + path);
    for (size_t c = 0; c < row.size(); ++c) {
      print_real(os, row[c]);
      os << (c + 1 < row.size() ? "," : "\n");
    }
  }
  atomic_write(path, os.str());
}

std::string file_checksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("file_checksum: cannot open " + path);
  uint64_t hash = 1469598103934665603ull;
  char c;
  while (in.get(c)) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp + " for writing");
    out << content;
    if (!out) throw IoError("write failed: " + tmp);
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("rename failed: " + path + ": " + ec.message());
}

}  // namespace porofrac::app
