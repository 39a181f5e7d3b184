#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "breather/evolution.hpp"
#include "breather/experiments.hpp"

namespace bbench {

/// Writes `contents` to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// index,lambda
void write_eigenvalues_csv(const std::filesystem::path& path, const std::vector<double>& eigenvalues);

struct ErrorRow {
    double t, z_h2, x1, x2, mass, energy, f_value, lyapunov;
};

/// t,z_h2,x1,x2,M,E,F,H
void write_error_series_csv(const std::filesystem::path& path, const std::vector<ErrorRow>& rows);

/// t,x,u in long form, thinned in time and space.
void write_snapshots_csv(const std::filesystem::path& path, const std::vector<double>& times,
                         const std::vector<mkdv::Field>& snapshots, std::size_t snapshot_every,
                         std::size_t space_every);

}  // namespace bbench
