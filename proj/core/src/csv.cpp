#include "plate/csv.hpp"

#include <fstream>
#include <iomanip>
#include <locale>
#include <sstream>

#include "plate/errors.hpp"

namespace plate {

namespace {

std::ofstream open_out(const std::filesystem::path& path, const std::string& hash) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os.imbue(std::locale::classic());
  os << std::setprecision(17);
  if (!hash.empty()) os << "# manifest=" << hash << '\n';
  return os;
}

void add_matrix_field(std::vector<KernelRecord>& out, int n, const std::string& block,
                      const TriangleGrid& g, const MatField& f) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int a = 0; a < g.m; ++a) {
        for (int b = 0; b <= a; ++b) {
          out.push_back({n, block, i + 1, j + 1, g.coord(a), g.coord(b), f[g.index(a, b)](i, j)});
        }
      }
    }
  }
}

void add_line_field(std::vector<KernelRecord>& out, int n, const std::string& block,
                    const TriangleGrid& g, const std::vector<Mat3>& f) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int a = 0; a < g.m; ++a) {
        out.push_back({n, block, i + 1, j + 1, g.coord(a), 0.0, f[static_cast<std::size_t>(a)](i, j)});
      }
    }
  }
}

}  // namespace

std::vector<KernelRecord> kernel_records(const ControllerKernels& k, const ObserverKernels* o) {
  std::vector<KernelRecord> out;
  add_matrix_field(out, k.n, "K", k.grid, k.K);
  add_matrix_field(out, k.n, "L", k.grid, k.L);
  add_line_field(out, k.n, "Phi", k.grid, k.Phi);
  add_line_field(out, k.n, "Omega", k.grid, k.Omega);
  if (o != nullptr) {
    add_matrix_field(out, o->n, "N", o->grid, o->N);
    add_matrix_field(out, o->n, "M", o->grid, o->M);
    add_line_field(out, o->n, "Pplus", o->grid, o->Pplus);
    add_line_field(out, o->n, "Pminus", o->grid, o->Pminus);
  }
  return out;
}

void write_kernels(const std::filesystem::path& path, const std::vector<KernelRecord>& rows,
                   const std::string& manifest_hash) {
  std::ofstream os = open_out(path, manifest_hash);
  os << "n,block,i,j,x,y,value\n";
  for (const KernelRecord& r : rows) {
    os << r.n << ',' << r.block << ',' << r.i << ',' << r.j << ',' << r.x << ',' << r.y << ','
       << r.value << '\n';
  }
}

std::vector<KernelRecord> read_kernels(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  std::vector<KernelRecord> out;
  std::string line;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "n,block,i,j,x,y,value") {
        throw ShapeError(path.string() + ": unexpected header");
      }
      header = true;
      continue;
    }
    std::istringstream ls(line);
    ls.imbue(std::locale::classic());
    KernelRecord r;
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    try {
      if (cells.size() != 7) throw std::invalid_argument("column count");
      r.n = std::stoi(cells[0]);
      r.block = cells[1];
      r.i = std::stoi(cells[2]);
      r.j = std::stoi(cells[3]);
      r.x = std::stod(cells[4]);
      r.y = std::stod(cells[5]);
      r.value = std::stod(cells[6]);
    } catch (const std::exception&) {
      throw ShapeError(path.string() + ": malformed line " + std::to_string(lineno));
    }
    out.push_back(r);
  }
  return out;
}

void write_gains(const std::filesystem::path& path, const GainTables& g,
                 const std::string& manifest_hash) {
  std::ofstream os = open_out(path, manifest_hash);
  os << "n,kind,i,j,xi,value\n";
  const std::vector<double> xi = g.grid.nodes();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 6; ++j) {
      for (std::size_t a = 0; a < xi.size(); ++a) {
        os << g.n << ",F," << i + 1 << ',' << j + 1 << ',' << xi[a] << ','
           << g.F[i][j](static_cast<Eigen::Index>(a)) << '\n';
      }
    }
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 6; ++j) {
      os << g.n << ",D," << i + 1 << ',' << j + 1 << ',' << (j % 2 == 0 ? 1 : 0) << ','
         << g.D(i, j) << '\n';
    }
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (std::size_t a = 0; a < xi.size(); ++a) {
        const auto q = static_cast<Eigen::Index>(a);
        os << g.n << ",k_edge," << i + 1 << ',' << j + 1 << ',' << xi[a] << ',' << g.k_edge[i][j](q)
           << '\n';
        os << g.n << ",l_edge," << i + 1 << ',' << j + 1 << ',' << xi[a] << ',' << g.l_edge[i][j](q)
           << '\n';
      }
    }
  }
}

void write_series(const std::filesystem::path& path, const ScenarioResult& r,
                  const std::string& manifest_hash) {
  std::ofstream os = open_out(path, manifest_hash);
  const bool feedback = !r.modes.empty() && !r.modes[0].V.empty();
  const bool output = !r.omega_d.empty();
  os << 't';
  for (const ModeSeries& m : r.modes) os << ",omega_" << m.n;
  os << ",omega_a";
  if (output) os << ",omega_d";
  if (feedback) {
    for (const ModeSeries& m : r.modes) os << ",V_" << m.n;
    for (const ModeSeries& m : r.modes) os << ",sigma_end_" << m.n;
  }
  for (const ModeSeries& m : r.modes) os << ",U_" << m.n;
  os << '\n';
  for (std::size_t k = 0; k < r.t.size(); ++k) {
    os << r.t[k];
    for (const ModeSeries& m : r.modes) os << ',' << m.omega[k];
    os << ',' << r.omega_a[k];
    if (output) os << ',' << r.omega_d[k];
    if (feedback) {
      for (const ModeSeries& m : r.modes) os << ',' << m.V[k];
      for (const ModeSeries& m : r.modes) os << ',' << m.sigma_end[k];
    }
    for (const ModeSeries& m : r.modes) os << ',' << m.U_phys[k].norm();
    os << '\n';
  }
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& s,
                    const std::string& manifest_hash) {
  std::ofstream os = open_out(path, manifest_hash);
  os << "x,y,w,alpha,beta\n";
  for (std::size_t a = 0; a < s.x.size(); ++a) {
    for (std::size_t b = 0; b < s.field.y.size(); ++b) {
      const auto i = static_cast<Eigen::Index>(a);
      const auto j = static_cast<Eigen::Index>(b);
      os << s.x[a] << ',' << s.field.y[b] << ',' << s.field.w(i, j) << ',' << s.field.alpha(i, j)
         << ',' << s.field.beta(i, j) << '\n';
    }
  }
}

void write_controls(const std::filesystem::path& path, const ScenarioResult& r,
                    const std::string& manifest_hash) {
  std::ofstream os = open_out(path, manifest_hash);
  os << "t,y,U1,U2,U3\n";
  for (const ControlSample& c : r.controls) {
    for (std::size_t b = 0; b < r.y.size(); ++b) {
      const auto j = static_cast<Eigen::Index>(b);
      os << c.t << ',' << r.y[b] << ',' << c.U.U1(j) << ',' << c.U.U2(j) << ',' << c.U.U3(j) << '\n';
    }
  }
}

void write_errors(const std::filesystem::path& path, const ScenarioResult& r,
                  const std::string& manifest_hash) {
  std::ofstream os = open_out(path, manifest_hash);
  os << "t,n,sigma_err,psi_err,X_err,Omega_nf\n";
  const auto stride = static_cast<std::size_t>(r.config.trace_stride);
  for (std::size_t k = 0; k < r.t.size(); k += stride) {
    for (const ModeSeries& m : r.modes) {
      if (m.errors.empty()) continue;
      const ErrorNorms& e = m.errors[k];
      os << r.t[k] << ',' << m.n << ',' << e.sigma << ',' << e.psi << ',' << e.X << ','
         << e.Omega_nf << '\n';
    }
  }
}

std::string snapshot_file_name(double t) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "snapshot_" << std::setprecision(6) << t << ".csv";
  return os.str();
}

}  // namespace plate
