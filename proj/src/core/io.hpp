#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "dhrg.hpp"

namespace dhrg {

// Whitespace-separated id pairs, one edge per line; '#' starts a comment line. Ids are arbitrary
// tokens, numbered densely in order of first appearance and kept as graph labels. A line with a
// single id declares a vertex without edges; the writer emits one for every isolated vertex.
NetworkGraph readEdgeList(std::istream& in);
NetworkGraph readEdgeListFile(const std::string& path);
void writeEdgeList(std::ostream& out, const NetworkGraph& graph);

// Embedding files start with a header line
//   embedding continuous <n> <R> <T> <alpha>
//   embedding grid <g7|g67> <n> <R> <T> <alpha>
// followed by n lines "<label> <r> <phi>" or "<label> <path>", where a path lists child indices
// from the root separated by commas and is empty for the root itself.
struct EmbeddingFile {
  bool continuous = true;
  GridKind grid = GridKind::G67;
  double R = 0;
  double T = 0;
  double alpha = 0;
  std::vector<std::string> labels;
  std::vector<PolarCoord> polar;        // continuous files
  std::vector<std::vector<int>> paths;  // grid files
};

EmbeddingFile readEmbeddingFile(std::istream& in);
EmbeddingFile readEmbeddingFile(const std::string& path);
void writeEmbeddingFile(std::ostream& out, const EmbeddingFile& e);

// Orders the file's entries by graph vertex; every graph label must appear exactly once.
ContinuousEmbedding continuousFor(const EmbeddingFile& e, const NetworkGraph& graph);
GridEmbedding gridFor(const EmbeddingFile& e, const NetworkGraph& graph, Grid& grid);

EmbeddingFile toFile(const ContinuousEmbedding& c, const NetworkGraph& graph);
EmbeddingFile toFile(const GridEmbedding& emb, const NetworkGraph& graph, const Grid& grid, double R, double T,
                     double alpha);

// Key-value preamble ("# key = value") followed by tab-separated tables, each introduced by a
// "[name]" line and a header row.
struct ReportTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};
struct Report {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<ReportTable> tables;

  void set(const std::string& key, const std::string& value);
  const std::string* find(const std::string& key) const;
  const ReportTable* table(const std::string& name) const;
};

// 17 significant digits, so values survive a text round trip.
std::string formatNumber(double x);
void writeReport(std::ostream& out, const Report& r);
Report parseReport(std::istream& in);

}  // namespace dhrg
