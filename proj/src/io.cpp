#include "pcr/io.hpp"

#include <cctype>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <vector>

namespace pcr {

namespace {

bool parse_double(const std::string& token, double& out) {
    const char* begin = token.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    if (end == begin) return false;
    while (*end != '\0') {
        if (!std::isspace(static_cast<unsigned char>(*end))) return false;
        ++end;
    }
    return true;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

bool blank(const std::string& s) {
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch))) return false;
    return true;
}

PointCloud rows_to_cloud(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw EmptyCloud("no points in file");
    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index k = static_cast<Eigen::Index>(rows.front().size());
    Matrix coords(n, 3);
    Matrix attrs(n, k - 3);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < 3; ++j) coords(i, j) = rows[i][j];
        for (Eigen::Index j = 3; j < k; ++j) attrs(i, j - 3) = rows[i][j];
    }
    return PointCloud(std::move(coords), std::move(attrs));
}

PointCloud load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    Eigen::Index width = -1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (blank(line)) continue;
        const auto fields = split_csv(line);
        std::vector<double> row;
        row.reserve(fields.size());
        bool numeric = true;
        for (const auto& f : fields) {
            double v;
            if (!parse_double(f, v)) {
                numeric = false;
                break;
            }
            row.push_back(v);
        }
        if (!numeric) {
            // a single leading non-numeric line is treated as a header
            if (rows.empty() && lineno == 1) continue;
            throw ParseError(path + ": non-numeric field at line " + std::to_string(lineno));
        }
        if (row.size() < 3)
            throw ParseError(path + ": fewer than 3 columns at line " + std::to_string(lineno));
        if (width < 0) width = static_cast<Eigen::Index>(row.size());
        if (static_cast<Eigen::Index>(row.size()) != width)
            throw ParseError(path + ": inconsistent column count at line " +
                             std::to_string(lineno));
        rows.push_back(std::move(row));
    }
    return rows_to_cloud(rows);
}

PointCloud load_ply(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::string line;
    int lineno = 0;

    auto next_line = [&](std::string& out) {
        if (!std::getline(in, out)) return false;
        ++lineno;
        if (!out.empty() && out.back() == '\r') out.pop_back();
        return true;
    };

    if (!next_line(line) || line != "ply") throw ParseError(path + ": missing ply magic");

    long vertex_count = -1;
    std::vector<std::string> properties;
    bool in_vertex_element = false;
    bool ascii = false;
    while (next_line(line)) {
        std::istringstream ls(line);
        std::string word;
        ls >> word;
        if (word == "format") {
            std::string fmt;
            ls >> fmt;
            ascii = (fmt == "ascii");
        } else if (word == "element") {
            std::string name;
            long count = 0;
            ls >> name >> count;
            in_vertex_element = (name == "vertex");
            if (in_vertex_element) vertex_count = count;
        } else if (word == "property" && in_vertex_element) {
            std::string type, name;
            ls >> type >> name;
            if (type == "list")
                throw ParseError(path + ": list properties are not supported (line " +
                                 std::to_string(lineno) + ")");
            properties.push_back(name);
        } else if (word == "end_header") {
            break;
        }
    }
    if (!ascii) throw ParseError(path + ": only ascii PLY is supported");
    if (vertex_count < 1) throw EmptyCloud(path + ": no vertex element");

    int ix = -1, iy = -1, iz = -1;
    for (size_t p = 0; p < properties.size(); ++p) {
        if (properties[p] == "x") ix = static_cast<int>(p);
        if (properties[p] == "y") iy = static_cast<int>(p);
        if (properties[p] == "z") iz = static_cast<int>(p);
    }
    if (ix < 0 || iy < 0 || iz < 0) throw ParseError(path + ": vertex element lacks x/y/z");

    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<size_t>(vertex_count));
    while (static_cast<long>(rows.size()) < vertex_count && next_line(line)) {
        if (blank(line)) continue;
        std::istringstream ls(line);
        std::vector<double> raw(properties.size());
        for (size_t p = 0; p < properties.size(); ++p) {
            std::string tok;
            if (!(ls >> tok) || !parse_double(tok, raw[p]))
                throw ParseError(path + ": bad vertex value at line " + std::to_string(lineno));
        }
        std::vector<double> row;
        row.reserve(properties.size());
        row.push_back(raw[static_cast<size_t>(ix)]);
        row.push_back(raw[static_cast<size_t>(iy)]);
        row.push_back(raw[static_cast<size_t>(iz)]);
        for (size_t p = 0; p < properties.size(); ++p) {
            if (static_cast<int>(p) == ix || static_cast<int>(p) == iy ||
                static_cast<int>(p) == iz)
                continue;
            row.push_back(raw[p]);
        }
        rows.push_back(std::move(row));
    }
    if (static_cast<long>(rows.size()) != vertex_count)
        throw ParseError(path + ": vertex element truncated");
    return rows_to_cloud(rows);
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

PointCloud load_cloud(const std::string& path, CloudFormat format) {
    return format == CloudFormat::ascii_ply ? load_ply(path) : load_csv(path);
}

PointCloud load_cloud(const std::string& path) {
    const bool ply = path.size() >= 4 && path.compare(path.size() - 4, 4, ".ply") == 0;
    return load_cloud(path, ply ? CloudFormat::ascii_ply : CloudFormat::xyz_csv);
}

void save_cloud(const std::string& path, const PointCloud& cloud, CloudFormat format) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    const Matrix m = cloud.stacked();
    if (format == CloudFormat::ascii_ply) {
        out << "ply\nformat ascii 1.0\n";
        out << "element vertex " << m.rows() << "\n";
        out << "property double x\nproperty double y\nproperty double z\n";
        for (Eigen::Index j = 3; j < m.cols(); ++j)
            out << "property double attr" << (j - 3) << "\n";
        out << "end_header\n";
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            for (Eigen::Index j = 0; j < m.cols(); ++j) {
                if (j) out << ' ';
                out << format_double(m(i, j));
            }
            out << '\n';
        }
    } else {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            for (Eigen::Index j = 0; j < m.cols(); ++j) {
                if (j) out << ',';
                out << format_double(m(i, j));
            }
            out << '\n';
        }
    }
    if (!out) throw Error("write failed for " + path);
}

void save_cloud(const std::string& path, const PointCloud& cloud) {
    const bool ply = path.size() >= 4 && path.compare(path.size() - 4, 4, ".ply") == 0;
    save_cloud(path, cloud, ply ? CloudFormat::ascii_ply : CloudFormat::xyz_csv);
}

std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (got < static_cast<std::streamsize>(sizeof(buf))) break;
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return out;
}

}  // namespace pcr
