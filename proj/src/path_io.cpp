#include "ctrwlab/path_io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

namespace ctrw {

using nlohmann::json;

json to_json(const CadlagPath& path) {
  json knots = json::array();
  for (const Knot& k : path.knots()) {
    json row = json::array({k.time, k.value, k.mode == Segment::hold ? "hold" : "linear"});
    if (k.anchor_time) {
      row.push_back(*k.anchor_time);
      row.push_back(k.anchor_value);
    }
    knots.push_back(std::move(row));
  }
  return json{{"dim", path.dim()}, {"horizon", path.horizon()}, {"knots", std::move(knots)}};
}

CadlagPath path_from_json(const json& j) {
  try {
    const auto dim = j.at("dim").get<std::size_t>();
    const auto horizon = j.at("horizon").get<double>();
    std::vector<Knot> knots;
    for (const auto& row : j.at("knots")) {
      if (!row.is_array() || (row.size() != 3 && row.size() != 5))
        throw std::invalid_argument("knot must be [t, [v...], mode] or [t, [v...], \"linear\", t_a, [v_a...]]");
      Knot k;
      k.time = row[0].get<double>();
      k.value = row[1].get<Vec>();
      const auto mode = row[2].get<std::string>();
      if (mode == "hold") {
        k.mode = Segment::hold;
      } else if (mode == "linear") {
        k.mode = Segment::linear;
      } else {
        throw std::invalid_argument("unknown segment mode '" + mode + "'");
      }
      if (row.size() == 5) {
        k.anchor_time = row[3].get<double>();
        k.anchor_value = row[4].get<Vec>();
      }
      knots.push_back(std::move(k));
    }
    return CadlagPath(dim, horizon, knots);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed path JSON: ") + e.what());
  }
}

CadlagPath read_path_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument(file + ": " + e.what());
  }
  return path_from_json(j);
}

void write_path_file(const std::string& file, const CadlagPath& path) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file);
  out << to_json(path).dump() << '\n';
}

std::vector<CadlagPath> read_path_lines(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file);
  std::vector<CadlagPath> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(path_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw std::invalid_argument(file + ": " + e.what());
    }
  }
  return out;
}

void write_path_lines(std::ostream& os, const std::vector<CadlagPath>& paths) {
  for (const auto& p : paths) os << to_json(p).dump() << '\n';
}

void write_csv(std::ostream& os, const CadlagPath& path, double mesh) {
  if (!(mesh > 0.0)) throw std::invalid_argument("csv mesh must be positive");
  os << "t";
  for (std::size_t c = 0; c < path.dim(); ++c) os << ",v" << (c + 1);
  os << '\n' << std::setprecision(17);
  auto row = [&](double t) {
    os << t;
    for (double v : path.eval(t)) os << ',' << v;
    os << '\n';
  };
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * mesh;
    if (t >= path.horizon()) break;
    row(t);
  }
  row(path.horizon());
}

}  // namespace ctrw
