#include "bbench/io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace bbench {

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out << contents;
        out.flush();
        if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot move '" + tmp.string() + "' into place: " + ec.message());
    }
}

std::string format_number(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    write_atomic(path, j.dump(2) + "\n");
}

void write_eigenvalues_csv(const std::filesystem::path& path, const std::vector<double>& eigenvalues) {
    std::string s = "index,lambda\n";
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        s += std::to_string(i) + "," + format_number(eigenvalues[i]) + "\n";
    }
    write_atomic(path, s);
}

void write_error_series_csv(const std::filesystem::path& path, const std::vector<ErrorRow>& rows) {
    std::string s = "t,z_h2,x1,x2,M,E,F,H\n";
    for (const ErrorRow& r : rows) {
        for (double v : {r.t, r.z_h2, r.x1, r.x2, r.mass, r.energy, r.f_value}) {
            s += format_number(v);
            s += ',';
        }
        s += format_number(r.lyapunov);
        s += '\n';
    }
    write_atomic(path, s);
}

void write_snapshots_csv(const std::filesystem::path& path, const std::vector<double>& times,
                         const std::vector<mkdv::Field>& snapshots, std::size_t snapshot_every,
                         std::size_t space_every) {
    if (snapshot_every == 0 || space_every == 0) throw std::invalid_argument("snapshot strides must be >= 1");
    std::string s = "t,x,u\n";
    for (std::size_t k = 0; k < snapshots.size(); k += snapshot_every) {
        const mkdv::Field& f = snapshots[k];
        const std::string t = format_number(times[k]);
        for (std::size_t i = 0; i < f.size(); i += space_every) {
            s += t;
            s += ',';
            s += format_number(f.grid().point(i));
            s += ',';
            s += format_number(f[i]);
            s += '\n';
        }
    }
    write_atomic(path, s);
}

}  // namespace bbench
