#pragma once

#include <string>

#include "pcr/core.hpp"

namespace pcr {

enum class CloudFormat { xyz_csv, ascii_ply };

/**
 * Reads a point cloud. xyz-csv: comma-separated numeric rows, optional
 * header line; the first three columns are x,y,z and any remaining
 * columns become attributes in file order. ascii-ply: element vertex
 * with properties x/y/z plus extra scalar properties as attributes.
 * Throws ParseError (with the offending line number) or EmptyCloud.
 */
PointCloud load_cloud(const std::string& path, CloudFormat format);

/// Format inferred from the extension (.ply -> ascii_ply, else xyz_csv).
PointCloud load_cloud(const std::string& path);

/// Writes the same formats load_cloud reads. Doubles are printed with 17
/// significant digits so a load/save round trip is value-exact.
void save_cloud(const std::string& path, const PointCloud& cloud, CloudFormat format);
void save_cloud(const std::string& path, const PointCloud& cloud);

/// Shortest decimal form that round-trips a double (%.17g).
std::string format_double(double v);

/// FNV-1a 64-bit hash of a file's bytes, as fixed-width hex.
std::string file_hash(const std::string& path);

}  // namespace pcr
