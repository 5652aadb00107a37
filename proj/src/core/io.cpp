#include "io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "error.hpp"

namespace dhrg {
namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

bool skippable(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

[[noreturn]] void parseError(int line, const std::string& what) {
  fail(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what);
}

double parseDouble(const std::string& s, int line, const char* what) {
  double x = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, x);
  if (ec != std::errc() || p != end || !std::isfinite(x)) parseError(line, std::string("bad ") + what + " '" + s + "'");
  return x;
}

long long parseInt(const std::string& s, int line, const char* what) {
  long long x = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, x);
  if (ec != std::errc() || p != end) parseError(line, std::string("bad ") + what + " '" + s + "'");
  return x;
}

std::vector<int> parsePath(const std::string& s, int line) {
  std::vector<int> path;
  if (s.empty()) return path;
  std::size_t start = 0;
  for (;;) {
    const auto comma = s.find(',', start);
    const auto part = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const auto i = parseInt(part, line, "child index");
    if (i < 0 || i > 64) parseError(line, "child index " + part + " out of range");
    path.push_back(static_cast<int>(i));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return path;
}

std::ifstream openIn(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
  return in;
}

std::vector<int> orderByGraph(const std::vector<std::string>& labels, const NetworkGraph& graph) {
  std::unordered_map<std::string, int> index;
  for (int v = 0; v < graph.vertexCount(); ++v) index.emplace(graph.label(v), v);
  std::vector<int> slot(static_cast<size_t>(graph.vertexCount()), -1);
  for (size_t i = 0; i < labels.size(); ++i) {
    auto it = index.find(labels[i]);
    if (it == index.end()) fail(ErrorKind::InvalidArgument, "embedding names unknown vertex '" + labels[i] + "'");
    if (slot[static_cast<size_t>(it->second)] >= 0)
      fail(ErrorKind::InvalidArgument, "vertex '" + labels[i] + "' appears twice in the embedding");
    slot[static_cast<size_t>(it->second)] = static_cast<int>(i);
  }
  for (int v = 0; v < graph.vertexCount(); ++v)
    if (slot[static_cast<size_t>(v)] < 0)
      fail(ErrorKind::InvalidArgument, "vertex '" + graph.label(v) + "' is missing from the embedding");
  return slot;
}

}  // namespace

NetworkGraph readEdgeList(std::istream& in) {
  std::unordered_map<std::string, int> ids;
  std::vector<std::string> labels;
  std::vector<std::pair<int, int>> edges;
  auto id = [&](const std::string& name) {
    auto [it, fresh] = ids.emplace(name, static_cast<int>(labels.size()));
    if (fresh) labels.push_back(name);
    return it->second;
  };
  std::string line;
  for (int lineNo = 1; std::getline(in, line); ++lineNo) {
    if (skippable(line)) continue;
    const auto t = tokens(line);
    if (t.size() == 1) {
      id(t[0]);
      continue;
    }
    if (t.size() != 2) parseError(lineNo, "expected two vertex ids, found " + std::to_string(t.size()) + " fields");
    const int u = id(t[0]);
    const int v = id(t[1]);
    edges.emplace_back(u, v);
  }
  NetworkGraph g(static_cast<int>(labels.size()), std::move(edges));
  g.labels = std::move(labels);
  return g;
}

NetworkGraph readEdgeListFile(const std::string& path) {
  auto in = openIn(path);
  return readEdgeList(in);
}

void writeEdgeList(std::ostream& out, const NetworkGraph& graph) {
  for (auto [u, v] : graph.edges()) out << graph.label(u) << ' ' << graph.label(v) << '\n';
  for (int v = 0; v < graph.vertexCount(); ++v)
    if (graph.neighbors(v).empty()) out << graph.label(v) << '\n';
}

EmbeddingFile readEmbeddingFile(std::istream& in) {
  EmbeddingFile e;
  std::string line;
  int lineNo = 0;
  long long n = -1;
  while (std::getline(in, line)) {
    ++lineNo;
    if (skippable(line)) continue;
    const auto t = tokens(line);
    if (n < 0) {
      if (t.empty() || t[0] != "embedding") parseError(lineNo, "expected an 'embedding' header");
      size_t k = 1;
      if (t.size() >= 2 && t[1] == "continuous") {
        e.continuous = true;
        k = 2;
      } else if (t.size() >= 3 && t[1] == "grid") {
        e.continuous = false;
        try {
          e.grid = parseGridKind(t[2]);
        } catch (const Error& err) {
          parseError(lineNo, err.what());
        }
        k = 3;
      } else {
        parseError(lineNo, "expected 'continuous' or 'grid <kind>' in the header");
      }
      if (t.size() != k + 4) parseError(lineNo, "header needs n, R, T and alpha");
      n = parseInt(t[k], lineNo, "vertex count");
      if (n < 0) parseError(lineNo, "negative vertex count");
      e.R = parseDouble(t[k + 1], lineNo, "R");
      e.T = parseDouble(t[k + 2], lineNo, "T");
      e.alpha = parseDouble(t[k + 3], lineNo, "alpha");
      continue;
    }
    if (static_cast<long long>(e.labels.size()) >= n) parseError(lineNo, "more vertex lines than the header declares");
    if (e.continuous) {
      if (t.size() != 3) parseError(lineNo, "expected '<id> <r> <phi>'");
      const double r = parseDouble(t[1], lineNo, "r");
      const double phi = parseDouble(t[2], lineNo, "phi");
      if (r < 0) parseError(lineNo, "negative radius");
      if (r > e.R * (1 + 1e-12)) parseError(lineNo, "radius " + t[1] + " exceeds R");
      e.polar.push_back({r, wrapAngle(phi)});
    } else {
      if (t.size() > 2 || t.empty()) parseError(lineNo, "expected '<id> <path>'");
      e.paths.push_back(parsePath(t.size() == 2 ? t[1] : std::string(), lineNo));
    }
    e.labels.push_back(t[0]);
  }
  if (n < 0) fail(ErrorKind::Parse, "missing 'embedding' header");
  if (static_cast<long long>(e.labels.size()) != n)
    fail(ErrorKind::Parse, "header declares " + std::to_string(n) + " vertices, file has " +
                               std::to_string(e.labels.size()));
  std::unordered_map<std::string, int> seen;
  for (const auto& l : e.labels)
    if (++seen[l] > 1) fail(ErrorKind::Parse, "vertex '" + l + "' appears twice");
  return e;
}

EmbeddingFile readEmbeddingFile(const std::string& path) {
  auto in = openIn(path);
  return readEmbeddingFile(in);
}

void writeEmbeddingFile(std::ostream& out, const EmbeddingFile& e) {
  out << "embedding ";
  if (e.continuous)
    out << "continuous";
  else
    out << "grid " << gridKindName(e.grid);
  out << ' ' << e.labels.size() << ' ' << formatNumber(e.R) << ' ' << formatNumber(e.T) << ' '
      << formatNumber(e.alpha) << '\n';
  for (size_t i = 0; i < e.labels.size(); ++i) {
    out << e.labels[i];
    if (e.continuous) {
      out << ' ' << formatNumber(e.polar[i].r) << ' ' << formatNumber(e.polar[i].phi);
    } else {
      out << ' ';
      for (size_t k = 0; k < e.paths[i].size(); ++k) out << (k ? "," : "") << e.paths[i][k];
    }
    out << '\n';
  }
}

ContinuousEmbedding continuousFor(const EmbeddingFile& e, const NetworkGraph& graph) {
  if (!e.continuous) fail(ErrorKind::InvalidArgument, "expected a continuous embedding");
  const auto slot = orderByGraph(e.labels, graph);
  ContinuousEmbedding c;
  c.R = e.R;
  c.T = e.T;
  c.alpha = e.alpha;
  for (int s : slot) c.at.push_back(e.polar[static_cast<size_t>(s)]);
  return c;
}

GridEmbedding gridFor(const EmbeddingFile& e, const NetworkGraph& graph, Grid& grid) {
  if (e.continuous) fail(ErrorKind::InvalidArgument, "expected a grid embedding");
  if (e.grid != grid.kind())
    fail(ErrorKind::InvalidArgument, "embedding uses grid " + std::string(gridKindName(e.grid)) + ", not " +
                                         std::string(gridKindName(grid.kind())));
  const auto slot = orderByGraph(e.labels, graph);
  GridEmbedding emb;
  for (int s : slot) {
    try {
      emb.at.push_back(grid.followPath(e.paths[static_cast<size_t>(s)]));
    } catch (const Error& err) {
      fail(ErrorKind::InvalidArgument, "vertex '" + e.labels[static_cast<size_t>(s)] + "': " + err.what());
    }
  }
  return emb;
}

EmbeddingFile toFile(const ContinuousEmbedding& c, const NetworkGraph& graph) {
  EmbeddingFile e;
  e.continuous = true;
  e.R = c.R;
  e.T = c.T;
  e.alpha = c.alpha;
  for (size_t v = 0; v < c.at.size(); ++v) e.labels.push_back(graph.label(static_cast<int>(v)));
  e.polar = c.at;
  return e;
}

EmbeddingFile toFile(const GridEmbedding& emb, const NetworkGraph& graph, const Grid& grid, double R, double T,
                     double alpha) {
  EmbeddingFile e;
  e.continuous = false;
  e.grid = grid.kind();
  e.R = R;
  e.T = T;
  e.alpha = alpha;
  for (size_t v = 0; v < emb.at.size(); ++v) {
    e.labels.push_back(graph.label(static_cast<int>(v)));
    e.paths.push_back(grid.pathOf(emb.at[v]));
  }
  return e;
}

void Report::set(const std::string& key, const std::string& value) {
  for (auto& kv : meta)
    if (kv.first == key) {
      kv.second = value;
      return;
    }
  meta.emplace_back(key, value);
}

const std::string* Report::find(const std::string& key) const {
  for (const auto& kv : meta)
    if (kv.first == key) return &kv.second;
  return nullptr;
}

const ReportTable* Report::table(const std::string& name) const {
  for (const auto& t : tables)
    if (t.name == name) return &t;
  return nullptr;
}

std::string formatNumber(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void writeReport(std::ostream& out, const Report& r) {
  for (const auto& [k, v] : r.meta) out << "# " << k << " = " << v << '\n';
  for (const auto& t : r.tables) {
    out << '\n' << '[' << t.name << "]\n";
    for (size_t i = 0; i < t.columns.size(); ++i) out << (i ? "\t" : "") << t.columns[i];
    out << '\n';
    for (const auto& row : t.rows) {
      for (size_t i = 0; i < row.size(); ++i) out << (i ? "\t" : "") << row[i];
      out << '\n';
    }
  }
}

Report parseReport(std::istream& in) {
  Report r;
  std::string line;
  ReportTable* current = nullptr;
  bool needHeader = false;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
      const auto tab = s.find('\t', start);
      out.push_back(s.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    return out;
  };
  for (int lineNo = 1; std::getline(in, line); ++lineNo) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0 && current == nullptr) {
      const auto eq = line.find(" = ");
      if (eq == std::string::npos) parseError(lineNo, "expected '# key = value'");
      r.meta.emplace_back(line.substr(2, eq - 2), line.substr(eq + 3));
    } else if (line.front() == '[' && line.back() == ']') {
      r.tables.push_back({line.substr(1, line.size() - 2), {}, {}});
      current = &r.tables.back();
      needHeader = true;
    } else if (current == nullptr) {
      parseError(lineNo, "data outside of a table");
    } else if (needHeader) {
      current->columns = split(line);
      needHeader = false;
    } else {
      auto row = split(line);
      if (row.size() != current->columns.size())
        parseError(lineNo, "row has " + std::to_string(row.size()) + " fields, table has " +
                               std::to_string(current->columns.size()) + " columns");
      current->rows.push_back(std::move(row));
    }
  }
  return r;
}

}  // namespace dhrg
