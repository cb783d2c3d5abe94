#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "sparsify/graph.hpp"

// Plain-text instance formats (diff- and oracle-friendly):
//
//   graph:       `g <n> <m>` header, then m lines `a b [w]`
//   hypergraph:  `h <n> <m>` header, then m lines `[w=<w>] v1 v2 ... vk`
//
// Lines starting with `#` are comments; sparsifier outputs carry a
// `# scale c=<c>` comment. Vertex labels may be arbitrary tokens: if every
// label is an integer in [0,n) the identity mapping is used (so serialized
// outputs round-trip exactly), otherwise labels are assigned 0-based ids in
// first-appearance order and the map is persisted alongside the output.

namespace sparsify {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LabelMap {
  std::vector<std::string> label_of;  // index -> original label
  bool identity = true;
};

namespace io_detail {

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline bool is_plain_index(const std::string& tok, long n, long& out) {
  if (tok.empty() || tok.size() > 9) return false;
  for (char c : tok)
    if (c < '0' || c > '9') return false;
  out = std::stol(tok);
  return out >= 0 && out < n;
}

struct Lines {
  std::vector<std::pair<int, std::string>> content;  // (line number, text)
  std::optional<double> scale;
};

inline Lines read_lines(std::istream& in, const std::string& where) {
  Lines out;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t i = line.find_first_not_of(" \t");
    if (i == std::string::npos) continue;
    if (line[i] == '#') {
      auto pos = line.find("scale c=");
      if (pos != std::string::npos) {
        try {
          out.scale = std::stod(line.substr(pos + 8));
        } catch (...) {
          throw ParseError(where + ":" + std::to_string(no) + ": bad scale header");
        }
      }
      continue;
    }
    out.content.emplace_back(no, line);
  }
  return out;
}

// Two-pass label resolution over all vertex tokens of the file. Files whose
// vertex tokens are all integers in [0,n) use the identity mapping; files
// with non-numeric tokens get first-appearance ids; an all-numeric file with
// an out-of-range value is rejected as a bad index.
class Labeler {
 public:
  Labeler(long n, const std::string& where) : n_(n), where_(where) {}

  void observe(const std::string& tok, int line) {
    bool numeric = !tok.empty() && tok.size() <= 9 &&
                   tok.find_first_not_of("0123456789") == std::string::npos;
    if (!numeric) all_numeric_ = false;
    long idx;
    if (identity_ && !is_plain_index(tok, n_, idx)) {
      identity_ = false;
      if (numeric && first_bad_line_ == 0) {
        first_bad_tok_ = tok;
        first_bad_line_ = line;
      }
    }
  }

  void freeze() {
    frozen_ = true;
    if (!identity_ && all_numeric_ && first_bad_line_ != 0)
      throw ParseError(where_ + ":" + std::to_string(first_bad_line_) +
                       ": vertex index " + first_bad_tok_ + " out of range [0," +
                       std::to_string(n_) + ")");
  }

  int resolve(const std::string& tok, int line) {
    if (!frozen_) throw std::logic_error("Labeler::resolve before freeze");
    if (identity_) {
      long idx;
      is_plain_index(tok, n_, idx);
      return static_cast<int>(idx);
    }
    auto it = ids_.find(tok);
    if (it != ids_.end()) return it->second;
    int id = static_cast<int>(ids_.size());
    if (id >= n_)
      throw ParseError(where_ + ":" + std::to_string(line) + ": more than " +
                       std::to_string(n_) + " distinct vertex labels");
    ids_.emplace(tok, id);
    labels_.push_back(tok);
    return id;
  }

  LabelMap finish() const {
    LabelMap map;
    map.identity = identity_;
    if (identity_) {
      map.label_of.resize(n_);
      for (long v = 0; v < n_; ++v) map.label_of[v] = std::to_string(v);
    } else {
      map.label_of = labels_;
      map.label_of.resize(n_);  // vertices never mentioned keep empty labels
    }
    return map;
  }

 private:
  long n_;
  std::string where_;
  bool identity_ = true;
  bool all_numeric_ = true;
  bool frozen_ = false;
  std::string first_bad_tok_;
  int first_bad_line_ = 0;
  std::unordered_map<std::string, int> ids_;
  std::vector<std::string> labels_;
};

struct Header {
  long n = 0;
  long m = 0;
};

inline Header parse_header(const Lines& lines, char tag, const std::string& where) {
  if (lines.content.empty()) throw ParseError(where + ": empty input");
  auto [hline, text] = lines.content.front();
  std::istringstream hs(text);
  std::string t;
  Header h{-1, -1};
  hs >> t >> h.n >> h.m;
  if (t != std::string(1, tag) || h.n < 0 || h.m < 0 || hs.fail())
    throw ParseError(where + ":" + std::to_string(hline) + ": expected header `" +
                     std::string(1, tag) + " <n> <m>`");
  if (static_cast<long>(lines.content.size()) - 1 != h.m)
    throw ParseError(where + ": header declares " + std::to_string(h.m) +
                     " lines, found " + std::to_string(lines.content.size() - 1));
  return h;
}

}  // namespace io_detail

struct ParsedGraph {
  Graph graph;
  LabelMap labels;
  std::optional<double> scale;
};

struct ParsedHypergraph {
  Hypergraph hypergraph;
  LabelMap labels;
  std::optional<double> scale;
};

inline ParsedGraph parse_graph(std::istream& in, const std::string& where = "<stream>") {
  auto lines = io_detail::read_lines(in, where);
  auto header = io_detail::parse_header(lines, 'g', where);

  struct Row {
    int line;
    std::string a, b;
    double w = 1.0;
  };
  std::vector<Row> rows;
  rows.reserve(header.m);
  io_detail::Labeler labeler(header.n, where);
  for (std::size_t i = 1; i < lines.content.size(); ++i) {
    auto [no, text] = lines.content[i];
    std::istringstream ls(text);
    Row row{no, "", "", 1.0};
    if (!(ls >> row.a >> row.b))
      throw ParseError(where + ":" + std::to_string(no) + ": expected `a b [w]`");
    std::string tw;
    if (ls >> tw) {
      try {
        std::size_t used = 0;
        row.w = std::stod(tw, &used);
        if (used != tw.size()) throw std::invalid_argument("");
      } catch (...) {
        throw ParseError(where + ":" + std::to_string(no) + ": bad weight `" + tw + "`");
      }
    }
    std::string extra;
    if (ls >> extra)
      throw ParseError(where + ":" + std::to_string(no) + ": trailing token `" + extra + "`");
    if (row.w < 0) throw ParseError(where + ":" + std::to_string(no) + ": negative weight");
    labeler.observe(row.a, no);
    labeler.observe(row.b, no);
    rows.push_back(std::move(row));
  }
  labeler.freeze();

  std::vector<Edge> edges;
  edges.reserve(rows.size());
  for (const auto& row : rows) {
    int a = labeler.resolve(row.a, row.line);
    int b = labeler.resolve(row.b, row.line);
    if (a == b) throw ParseError(where + ":" + std::to_string(row.line) + ": self-loop");
    edges.push_back({a, b, row.w});
  }
  return {Graph(static_cast<int>(header.n), std::move(edges)), labeler.finish(),
          lines.scale};
}

inline ParsedHypergraph parse_hypergraph(std::istream& in,
                                         const std::string& where = "<stream>") {
  auto lines = io_detail::read_lines(in, where);
  auto header = io_detail::parse_header(lines, 'h', where);

  struct Row {
    int line;
    std::vector<std::string> vs;
    double w = 1.0;
  };
  std::vector<Row> rows;
  rows.reserve(header.m);
  io_detail::Labeler labeler(header.n, where);
  for (std::size_t i = 1; i < lines.content.size(); ++i) {
    auto [no, text] = lines.content[i];
    std::istringstream ls(text);
    Row row{no, {}, 1.0};
    std::string tok;
    bool first = true;
    while (ls >> tok) {
      if (first && tok.rfind("w=", 0) == 0) {
        try {
          row.w = std::stod(tok.substr(2));
        } catch (...) {
          throw ParseError(where + ":" + std::to_string(no) + ": bad weight `" + tok + "`");
        }
        first = false;
        continue;
      }
      first = false;
      labeler.observe(tok, no);
      row.vs.push_back(tok);
    }
    if (row.w < 0) throw ParseError(where + ":" + std::to_string(no) + ": negative weight");
    rows.push_back(std::move(row));
  }
  labeler.freeze();

  std::vector<Hyperedge> edges;
  edges.reserve(rows.size());
  for (const auto& row : rows) {
    Hyperedge he;
    he.w = row.w;
    for (const auto& tok : row.vs) he.vertices.push_back(labeler.resolve(tok, row.line));
    auto sorted = he.vertices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ParseError(where + ":" + std::to_string(row.line) +
                       ": repeated vertex in hyperedge");
    edges.push_back(std::move(he));
  }
  return {Hypergraph(static_cast<int>(header.n), std::move(edges)), labeler.finish(),
          lines.scale};
}

inline ParsedGraph parse_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  return parse_graph(in, path);
}

inline ParsedHypergraph parse_hypergraph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  return parse_hypergraph(in, path);
}

inline void serialize_graph(const Graph& g, std::ostream& out,
                            std::optional<double> scale = std::nullopt) {
  if (scale) out << "# scale c=" << io_detail::fmt_double(*scale) << "\n";
  out << "g " << g.num_vertices() << " " << g.num_edges() << "\n";
  for (const auto& e : g.edges()) {
    out << e.a << " " << e.b;
    if (e.w != 1.0) out << " " << io_detail::fmt_double(e.w);
    out << "\n";
  }
}

inline void serialize_hypergraph(const Hypergraph& h, std::ostream& out,
                                 std::optional<double> scale = std::nullopt) {
  if (scale) out << "# scale c=" << io_detail::fmt_double(*scale) << "\n";
  out << "h " << h.num_vertices() << " " << h.num_edges() << "\n";
  for (const auto& e : h.edges()) {
    if (e.w != 1.0) out << "w=" << io_detail::fmt_double(e.w) << " ";
    for (std::size_t i = 0; i < e.vertices.size(); ++i)
      out << (i ? " " : "") << e.vertices[i];
    out << "\n";
  }
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot write");
  out << content;
}

}  // namespace sparsify
