#include "pssa/dataset.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pssa/sphere.hpp"
#include "pssa/torus.hpp"

namespace pssa {

Eigen::Index Dataset::count() const {
  return std::visit(
      [this](const auto& d) -> Eigen::Index {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, GrassmannDesc>)
          return static_cast<Eigen::Index>(frames.size());
        else if constexpr (std::is_same_v<T, PolysphereDesc>)
          return static_cast<Eigen::Index>(poly_points.size());
        else
          return columns.cols();
      },
      manifold);
}

namespace {

std::vector<double> parse_row(const std::string& line, std::size_t lineno) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) comma = line.size();
    std::string cell = line.substr(pos, comma - pos);
    // trim
    while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.front())))
      cell.erase(cell.begin());
    while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.back())))
      cell.pop_back();
    if (!cell.empty()) {
      try {
        std::size_t used = 0;
        out.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) +
                         ": bad number '" + cell + "'");
      }
    }
    if (comma == line.size()) break;
    pos = comma + 1;
  }
  return out;
}

struct RawCsv {
  std::vector<std::string> header;
  std::vector<std::vector<std::vector<double>>> blocks;  // split at blank lines
  std::optional<ManifoldDescriptor> declared;
};

std::optional<ManifoldDescriptor> parse_header_manifold(
    const std::vector<std::string>& header) {
  std::string type;
  int n = -1, k = -1;
  std::vector<poly::FactorKind> factors;
  for (const auto& line : header) {
    std::istringstream in(line);
    std::string token;
    while (in >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = token.substr(0, eq);
      const std::string value = token.substr(eq + 1);
      if (key == "manifold") type = value;
      if (key == "n") n = std::stoi(value);
      if (key == "k") k = std::stoi(value);
      if (key == "factors") {
        for (char c : value) {
          if (c == '2') factors.push_back(poly::FactorKind::Sphere);
          if (c == '1') factors.push_back(poly::FactorKind::Circle);
        }
      }
    }
  }
  if (type.empty()) return std::nullopt;
  if (type == "sphere") return SphereDesc{n};
  if (type == "torus") return TorusDesc{n};
  if (type == "grassmann") return GrassmannDesc{k, n};
  if (type == "polysphere") {
    if (factors.empty() && n > 0)
      factors.assign(static_cast<std::size_t>(n), poly::FactorKind::Sphere);
    return PolysphereDesc{factors};
  }
  throw ParseError("unknown manifold in header: " + type);
}

RawCsv read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  RawCsv raw;
  raw.blocks.emplace_back();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() == '#') {
      raw.header.push_back(line.substr(1));
      continue;
    }
    const bool blank =
        line.find_first_not_of(" \t") == std::string::npos;
    if (blank) {
      if (!raw.blocks.back().empty()) raw.blocks.emplace_back();
      continue;
    }
    raw.blocks.back().push_back(parse_row(line, lineno));
  }
  if (!raw.blocks.empty() && raw.blocks.back().empty()) raw.blocks.pop_back();
  raw.declared = parse_header_manifold(raw.header);
  return raw;
}

std::vector<std::vector<double>> flatten(const RawCsv& raw) {
  std::vector<std::vector<double>> rows;
  for (const auto& block : raw.blocks)
    rows.insert(rows.end(), block.begin(), block.end());
  return rows;
}

void check_row_sizes(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw ParseError("dataset has no data rows");
  for (const auto& r : rows)
    if (r.size() != rows.front().size())
      throw ParseError("rows have inconsistent lengths");
}

Dataset assemble(const std::optional<ManifoldDescriptor>& requested,
                 const RawCsv& raw, bool renormalize) {
  std::optional<ManifoldDescriptor> manifold = requested;
  if (raw.declared) {
    if (manifold && manifold->index() != raw.declared->index())
      throw ParseError("requested manifold disagrees with the file header");
    if (!manifold) manifold = raw.declared;
  }
  if (!manifold)
    throw ParseError("manifold not given and not declared in the file");

  Dataset data;
  data.header = raw.header;

  if (std::holds_alternative<GrassmannDesc>(*manifold)) {
    if (raw.blocks.empty()) throw ParseError("no frames in dataset");
    const std::size_t k = raw.blocks.front().size();
    for (const auto& block : raw.blocks) {
      if (block.size() != k)
        throw ParseError("grassmann frames have differing plane dimensions");
      check_row_sizes(block);
      const std::size_t n = block.front().size();
      Eigen::MatrixXd frame(n, k);
      for (std::size_t c = 0; c < k; ++c)
        for (std::size_t r = 0; r < n; ++r)
          frame(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
              block[c][r];
      if (!linalg::is_orthonormal(frame, tolerances().unit_norm)) {
        if (!renormalize)
          throw NonOrthonormalFrame("frame is not orthonormal");
        frame = linalg::orthonormalize(frame);
      }
      data.frames.push_back(std::move(frame));
    }
    const auto n = data.frames.front().rows();
    const auto k_idx = data.frames.front().cols();
    data.manifold = GrassmannDesc{static_cast<int>(k_idx), static_cast<int>(n)};
    return data;
  }

  const auto rows = flatten(raw);
  check_row_sizes(rows);
  const Eigen::Index width = static_cast<Eigen::Index>(rows.front().size());
  const Eigen::Index d = static_cast<Eigen::Index>(rows.size());

  if (std::holds_alternative<SphereDesc>(*manifold)) {
    if (width < 2) throw ParseError("sphere rows need at least 2 entries");
    Eigen::MatrixXd X(width, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < width; ++j)
        X(j, i) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    data.columns = sphere::validate_unit_columns(X, renormalize);
    data.manifold = SphereDesc{static_cast<int>(width - 1)};
    return data;
  }

  if (std::holds_alternative<TorusDesc>(*manifold)) {
    Eigen::MatrixXd X(width, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < width; ++j)
        X(j, i) = torus::wrap_unit(
            rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    data.columns = X;
    data.manifold = TorusDesc{static_cast<int>(width)};
    return data;
  }

  // polysphere: 3n reals per row
  if (width % 3 != 0)
    throw ParseError("polysphere rows must hold 3 entries per factor");
  const Eigen::Index nf = width / 3;
  for (Eigen::Index i = 0; i < d; ++i) {
    poly::PolyPoint p;
    for (Eigen::Index f = 0; f < nf; ++f) {
      Eigen::Vector3d v(rows[static_cast<std::size_t>(i)][3 * f],
                        rows[static_cast<std::size_t>(i)][3 * f + 1],
                        rows[static_cast<std::size_t>(i)][3 * f + 2]);
      const double norm = v.norm();
      if (std::abs(norm - 1.0) > tolerances().unit_norm) {
        if (!renormalize || norm <= tolerances().rank_relative)
          throw NonUnitData("polysphere factor is not unit norm");
        v /= norm;
      }
      p.push_back(v);
    }
    data.poly_points.push_back(std::move(p));
  }
  data.manifold = PolysphereDesc{std::vector<poly::FactorKind>(
      static_cast<std::size_t>(nf), poly::FactorKind::Sphere)};
  return data;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

RawCsv read_json_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  Json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad JSON dataset: ") + e.what());
  }
  RawCsv raw;
  if (doc.contains("manifold"))
    raw.declared = manifold_from_json(doc.at("manifold"));
  if (doc.contains("frames")) {
    for (const auto& frame : doc.at("frames")) {
      std::vector<std::vector<double>> block;
      for (const auto& row : frame)
        block.push_back(row.get<std::vector<double>>());
      raw.blocks.push_back(std::move(block));
    }
  } else if (doc.contains("points")) {
    raw.blocks.emplace_back();
    for (const auto& row : doc.at("points"))
      raw.blocks.back().push_back(row.get<std::vector<double>>());
  } else {
    throw ParseError("JSON dataset needs 'points' or 'frames'");
  }
  return raw;
}

}  // namespace

Dataset load_dataset(const std::string& path,
                     const std::optional<ManifoldDescriptor>& manifold,
                     bool renormalize) {
  RawCsv raw = ends_with(path, ".json") ? read_json_dataset(path)
                                        : read_csv(path);
  return assemble(manifold, raw, renormalize);
}

void save_dataset_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  for (const auto& line : data.header) out << "#" << line << "\n";
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GrassmannDesc>) {
          bool first = true;
          for (const auto& frame : data.frames) {
            if (!first) out << "\n";
            first = false;
            for (Eigen::Index c = 0; c < frame.cols(); ++c) {
              for (Eigen::Index r = 0; r < frame.rows(); ++r)
                out << (r ? "," : "") << format_double(frame(r, c));
              out << "\n";
            }
          }
        } else if constexpr (std::is_same_v<T, PolysphereDesc>) {
          for (const auto& p : data.poly_points) {
            bool lead = true;
            for (const auto& v : p)
              for (int c = 0; c < 3; ++c) {
                out << (lead ? "" : ",") << format_double(v(c));
                lead = false;
              }
            out << "\n";
          }
        } else {
          for (Eigen::Index i = 0; i < data.columns.cols(); ++i) {
            for (Eigen::Index j = 0; j < data.columns.rows(); ++j)
              out << (j ? "," : "") << format_double(data.columns(j, i));
            out << "\n";
          }
        }
      },
      data.manifold);
}

void save_dataset_json(const std::string& path, const Dataset& data) {
  Json doc;
  doc["schema"] = "pssa-dataset/1";
  doc["manifold"] = manifold_to_json(data.manifold);
  if (!data.header.empty()) doc["comments"] = data.header;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GrassmannDesc>) {
          Json frames = Json::array();
          for (const auto& frame : data.frames) {
            Json block = Json::array();
            for (Eigen::Index c = 0; c < frame.cols(); ++c) {
              Json row = Json::array();
              for (Eigen::Index r = 0; r < frame.rows(); ++r)
                row.push_back(frame(r, c));
              block.push_back(std::move(row));
            }
            frames.push_back(std::move(block));
          }
          doc["frames"] = std::move(frames);
        } else if constexpr (std::is_same_v<T, PolysphereDesc>) {
          Json pts = Json::array();
          for (const auto& p : data.poly_points) {
            Json row = Json::array();
            for (const auto& v : p)
              for (int c = 0; c < 3; ++c) row.push_back(v(c));
            pts.push_back(std::move(row));
          }
          doc["points"] = std::move(pts);
        } else {
          Json pts = Json::array();
          for (Eigen::Index i = 0; i < data.columns.cols(); ++i) {
            Json row = Json::array();
            for (Eigen::Index j = 0; j < data.columns.rows(); ++j)
              row.push_back(data.columns(j, i));
            pts.push_back(std::move(row));
          }
          doc["points"] = std::move(pts);
        }
      },
      data.manifold);
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << doc.dump(2) << "\n";
}

}  // namespace pssa
