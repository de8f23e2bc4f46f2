#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "plate/control.hpp"
#include "plate/kernels.hpp"
#include "plate/scenario.hpp"

namespace plate {

/// One row of a kernels_<n>.csv table.
struct KernelRecord {
  int n = 0;
  std::string block;  // K, L, Phi, Omega, N, M, Pplus, Pminus
  int i = 0, j = 0;
  double x = 0.0, y = 0.0;  // y = 0 for the blocks that depend on x only
  double value = 0.0;
};

/// Flattens the kernel tables of one mode (observer tables when given).
std::vector<KernelRecord> kernel_records(const ControllerKernels& k, const ObserverKernels* o);

/// Every file starts with "# manifest=<hash>" when `manifest_hash` is not empty.
void write_kernels(const std::filesystem::path& path, const std::vector<KernelRecord>& rows,
                   const std::string& manifest_hash = {});
std::vector<KernelRecord> read_kernels(const std::filesystem::path& path);

/// (n, kind, i, j, xi, value): kind F over the grid, D at the boundary
/// point it multiplies (xi = 1 or 0), k_edge / l_edge over the grid.
void write_gains(const std::filesystem::path& path, const GainTables& g,
                 const std::string& manifest_hash = {});

/// t, omega_<n>..., omega_a, [omega_d], [V_<n>...], [sigma_end_<n>...], U_<n>...
void write_series(const std::filesystem::path& path, const ScenarioResult& r,
                  const std::string& manifest_hash = {});

/// x, y, w, alpha, beta.
void write_snapshot(const std::filesystem::path& path, const Snapshot& s,
                    const std::string& manifest_hash = {});

/// t, y, U1, U2, U3 for every stored control sample.
void write_controls(const std::filesystem::path& path, const ScenarioResult& r,
                    const std::string& manifest_hash = {});

/// t, n, sigma_err, psi_err, X_err, Omega_nf every trace_stride steps.
void write_errors(const std::filesystem::path& path, const ScenarioResult& r,
                  const std::string& manifest_hash = {});

/// File name of a snapshot, e.g. snapshot_2.csv or snapshot_0.5.csv.
std::string snapshot_file_name(double t);

}  // namespace plate
