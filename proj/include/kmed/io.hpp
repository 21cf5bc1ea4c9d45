#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "kmed/core.hpp"

namespace kmed::io {

enum class LabelColumn { none, first, last };

// Parses one point per line, comma- or whitespace-delimited (auto-detected
// from the first data line); '#' starts a comment, blank lines are skipped.
// Labels, when declared, must parse as integers. Throws DataError naming the
// offending 1-based line on ragged rows, non-numeric cells or an empty file.
Dataset load_dataset(const std::filesystem::path& path,
                     LabelColumn label_column = LabelColumn::none);

// Comma-delimited, 17 significant digits so values round-trip bit-exactly;
// labels, when present, form the last column.
void write_dataset(const Dataset& ds, const std::filesystem::path& path);

// Points whose label is in `classes`, original order, labels retained.
// Throws DataError when ds is unlabeled or the subset is empty.
Dataset subset_by_class(const Dataset& ds, const std::vector<int>& classes);

// Per-attribute (x - min) / (max - min); a constant attribute maps to zero.
Dataset normalize_min_max(const Dataset& ds);

struct ClusterSpec {
  std::vector<double> center;
  double stddev = 1.0;
  int count = 0;
};

struct GeneratorSpec {
  std::vector<ClusterSpec> clusters;
  std::uint64_t seed = 0;
};

// Isotropic Gaussian clusters in declaration order, labeled by cluster
// ordinal. Deterministic for a given seed. Throws ConfigError on empty
// cluster lists, non-positive counts or stddev, or mismatched dimensions.
Dataset generate(const GeneratorSpec& spec);

// Parses the CLI cluster syntax "cx,cy:stddev:count;..." into a spec.
GeneratorSpec parse_generator_spec(std::string_view clusters,
                                   std::uint64_t seed);

struct ManifestEntry {
  std::string id;
  std::filesystem::path path;  // relative entries resolve against the manifest
  int n = 0;
  int p = 0;
  int classes = 0;
};

// One entry per line: id path n p classes. '#' comments and blanks skipped.
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

// Loads the entry's file (labels in the last column when classes > 0) and
// verifies point count, attribute count and distinct label count against the
// manifest, throwing DataError on any mismatch or an unknown id.
Dataset load_by_id(const std::vector<ManifestEntry>& manifest,
                   const std::string& id);

}  // namespace kmed::io
