#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "ctrwlab/path.hpp"

namespace ctrw {

/// {"dim": d, "horizon": H, "knots": [[t, [v...], "hold"|"linear"], ...]}.
/// A linear knot whose anchor is not the next knot carries two extra
/// entries: [t, [v...], "linear", anchor_t, [anchor_v...]].
nlohmann::json to_json(const CadlagPath& path);
CadlagPath path_from_json(const nlohmann::json& j);

CadlagPath read_path_file(const std::string& file);
void write_path_file(const std::string& file, const CadlagPath& path);

/// One compact JSON object per line.
std::vector<CadlagPath> read_path_lines(const std::string& file);
void write_path_lines(std::ostream& os, const std::vector<CadlagPath>& paths);

/// Samples t = 0, mesh, 2 mesh, ... and the horizon as "t,v1,...,vd" rows.
void write_csv(std::ostream& os, const CadlagPath& path, double mesh);

}  // namespace ctrw
