#include "kmed/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "kmed/rng.hpp"

namespace kmed::io {

namespace {

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

std::vector<std::string> split_cells(const std::string& line, bool comma) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  if (comma) {
    while (std::getline(in, cell, ',')) cells.push_back(cell);
  } else {
    while (in >> cell) cells.push_back(cell);
  }
  return cells;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_double(std::string_view cell, const std::filesystem::path& path,
                    std::size_t line_no) {
  const auto s = trim(cell);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw DataError(path.string() + ":" + std::to_string(line_no) +
                    ": non-numeric cell '" + std::string(cell) + "'");
  }
  return value;
}

int parse_label(std::string_view cell, const std::filesystem::path& path,
                std::size_t line_no) {
  const auto s = trim(cell);
  int value = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw DataError(path.string() + ":" + std::to_string(line_no) +
                    ": label is not an integer: '" + std::string(cell) + "'");
  }
  return value;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& path,
                     LabelColumn label_column) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset file " + path.string());

  Dataset ds;
  std::string line;
  std::size_t line_no = 0;
  bool comma = false;
  bool delimiter_known = false;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = strip_comment(line);
    if (trim(body).empty()) continue;
    if (!delimiter_known) {
      comma = body.find(',') != std::string::npos;
      delimiter_known = true;
    }
    const auto cells = split_cells(body, comma);
    const int label_cells = label_column == LabelColumn::none ? 0 : 1;
    const int width = static_cast<int>(cells.size()) - label_cells;
    if (width < 1) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": no attribute columns");
    }
    if (ds.n == 0) {
      ds.p = width;
    } else if (width != ds.p) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected " + std::to_string(ds.p + label_cells) +
                      " columns, got " + std::to_string(cells.size()));
    }
    const int first_attr = label_column == LabelColumn::first ? 1 : 0;
    for (int a = 0; a < ds.p; ++a) {
      ds.values.push_back(parse_double(cells[first_attr + a], path, line_no));
    }
    if (label_column == LabelColumn::first) {
      ds.labels.push_back(parse_label(cells.front(), path, line_no));
    } else if (label_column == LabelColumn::last) {
      ds.labels.push_back(parse_label(cells.back(), path, line_no));
    }
    ++ds.n;
  }
  if (ds.n == 0) throw DataError("dataset file " + path.string() + " is empty");
  validate_dataset(ds);
  return ds;
}

void write_dataset(const Dataset& ds, const std::filesystem::path& path) {
  validate_dataset(ds);
  std::ofstream out(path);
  if (!out) throw DataError("cannot write dataset file " + path.string());
  for (int i = 0; i < ds.n; ++i) {
    for (int a = 0; a < ds.p; ++a) {
      if (a > 0) out << ',';
      out << format_g17(ds.at(i, a));
    }
    if (ds.has_labels()) out << ',' << ds.labels[i];
    out << '\n';
  }
  if (!out.flush()) throw DataError("failed writing " + path.string());
}

Dataset subset_by_class(const Dataset& ds, const std::vector<int>& classes) {
  validate_dataset(ds);
  if (!ds.has_labels()) throw DataError("subset_by_class: dataset is unlabeled");
  if (classes.empty()) throw DataError("subset_by_class: empty class list");
  const std::set<int> wanted(classes.begin(), classes.end());

  Dataset out;
  out.p = ds.p;
  for (int i = 0; i < ds.n; ++i) {
    if (!wanted.count(ds.labels[i])) continue;
    const auto pt = ds.point(i);
    out.values.insert(out.values.end(), pt.begin(), pt.end());
    out.labels.push_back(ds.labels[i]);
    ++out.n;
  }
  if (out.n == 0) {
    throw DataError("subset_by_class: no points carry the requested classes");
  }
  return out;
}

Dataset normalize_min_max(const Dataset& ds) {
  validate_dataset(ds);
  Dataset out = ds;
  for (int a = 0; a < ds.p; ++a) {
    double lo = ds.at(0, a);
    double hi = lo;
    for (int i = 1; i < ds.n; ++i) {
      lo = std::min(lo, ds.at(i, a));
      hi = std::max(hi, ds.at(i, a));
    }
    const double span = hi - lo;
    for (int i = 0; i < ds.n; ++i) {
      auto& cell = out.values[static_cast<std::size_t>(i) * ds.p + a];
      cell = span == 0.0 ? 0.0 : (cell - lo) / span;
    }
  }
  return out;
}

Dataset generate(const GeneratorSpec& spec) {
  if (spec.clusters.empty()) throw ConfigError("generate: no clusters declared");
  const auto dim = spec.clusters.front().center.size();
  if (dim == 0) throw ConfigError("generate: empty cluster center");
  for (const auto& c : spec.clusters) {
    if (c.center.size() != dim) {
      throw ConfigError("generate: cluster centers disagree on dimension");
    }
    if (c.count < 1) throw ConfigError("generate: cluster count must be >= 1");
    if (!(c.stddev > 0.0)) throw ConfigError("generate: stddev must be > 0");
  }

  RngStream rng(spec.seed);
  Dataset ds;
  ds.p = static_cast<int>(dim);
  for (std::size_t ordinal = 0; ordinal < spec.clusters.size(); ++ordinal) {
    const auto& c = spec.clusters[ordinal];
    for (int i = 0; i < c.count; ++i) {
      for (std::size_t a = 0; a < dim; ++a) {
        ds.values.push_back(c.center[a] + c.stddev * rng.next_normal());
      }
      ds.labels.push_back(static_cast<int>(ordinal));
      ++ds.n;
    }
  }
  return ds;
}

GeneratorSpec parse_generator_spec(std::string_view clusters,
                                   std::uint64_t seed) {
  GeneratorSpec spec;
  spec.seed = seed;
  std::istringstream groups{std::string(clusters)};
  std::string group;
  while (std::getline(groups, group, ';')) {
    if (trim(group).empty()) continue;
    std::istringstream fields(group);
    std::string center_text, stddev_text, count_text;
    if (!std::getline(fields, center_text, ':') ||
        !std::getline(fields, stddev_text, ':') ||
        !std::getline(fields, count_text)) {
      throw ConfigError("generate: cluster spec needs center:stddev:count, got '" +
                        group + "'");
    }
    ClusterSpec c;
    std::istringstream coords(center_text);
    std::string coord;
    while (std::getline(coords, coord, ',')) {
      const auto s = trim(coord);
      double v = 0.0;
      const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || end != s.data() + s.size()) {
        throw ConfigError("generate: bad center coordinate '" + coord + "'");
      }
      c.center.push_back(v);
    }
    {
      const auto s = trim(stddev_text);
      const auto [end, ec] =
          std::from_chars(s.data(), s.data() + s.size(), c.stddev);
      if (ec != std::errc() || end != s.data() + s.size()) {
        throw ConfigError("generate: bad stddev '" + stddev_text + "'");
      }
    }
    {
      const auto s = trim(count_text);
      const auto [end, ec] =
          std::from_chars(s.data(), s.data() + s.size(), c.count);
      if (ec != std::errc() || end != s.data() + s.size()) {
        throw ConfigError("generate: bad count '" + count_text + "'");
      }
    }
    spec.clusters.push_back(std::move(c));
  }
  if (spec.clusters.empty()) {
    throw ConfigError("generate: no clusters declared");
  }
  return spec;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path.string());
  std::vector<ManifestEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = strip_comment(line);
    if (trim(body).empty()) continue;
    std::istringstream fields(body);
    ManifestEntry e;
    std::string raw_path;
    if (!(fields >> e.id >> raw_path >> e.n >> e.p >> e.classes)) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": manifest line needs: id path n p classes");
    }
    e.path = std::filesystem::path(raw_path);
    if (e.path.is_relative()) e.path = path.parent_path() / e.path;
    entries.push_back(std::move(e));
  }
  return entries;
}

Dataset load_by_id(const std::vector<ManifestEntry>& manifest,
                   const std::string& id) {
  const auto it = std::find_if(manifest.begin(), manifest.end(),
                               [&](const auto& e) { return e.id == id; });
  if (it == manifest.end()) {
    throw DataError("manifest has no dataset '" + id + "'");
  }
  const auto label_column =
      it->classes > 0 ? LabelColumn::last : LabelColumn::none;
  Dataset ds = load_dataset(it->path, label_column);
  if (ds.n != it->n || ds.p != it->p) {
    throw DataError("dataset '" + id + "': file has n=" + std::to_string(ds.n) +
                    " p=" + std::to_string(ds.p) + ", manifest declares n=" +
                    std::to_string(it->n) + " p=" + std::to_string(it->p));
  }
  const std::set<int> distinct(ds.labels.begin(), ds.labels.end());
  if (static_cast<int>(distinct.size()) != it->classes) {
    throw DataError("dataset '" + id + "': file has " +
                    std::to_string(distinct.size()) +
                    " classes, manifest declares " +
                    std::to_string(it->classes));
  }
  return ds;
}

}  // namespace kmed::io
