#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "genuskit/graph.hpp"

namespace genuskit {

namespace {

bool parse_int(const std::string& s, VertexId& out) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (std::size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) return false;
  try {
    out = std::stoll(s);
  } catch (...) {
    return false;
  }
  return out >= 0;
}

// Tokens that are not plain non-negative integers become labelled vertices
// with fresh ids, assigned after all numeric ids are known.
class NameTable {
 public:
  explicit NameTable(Graph& g) : g_(g) {}
  VertexId resolve(const std::string& tok) {
    VertexId id;
    if (parse_int(tok, id)) {
      g_.add_vertex(id);
      return id;
    }
    auto it = names_.find(tok);
    if (it != names_.end()) return it->second;
    VertexId v = g_.add_vertex();
    g_.set_label(v, tok);
    names_[tok] = v;
    return v;
  }

 private:
  Graph& g_;
  std::map<std::string, VertexId> names_;
};

}  // namespace

Graph read_edge_list(std::istream& in) {
  // Two passes so that numeric ids never collide with fresh label ids.
  std::vector<std::vector<std::string>> lines;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) toks.push_back(t);
    if (toks.empty()) continue;
    if (toks.size() == 1 || toks.size() == 2) {
      lines.push_back(toks);
      continue;
    }
    throw GraphError("edge list line " + std::to_string(lineno) + ": expected 'u v'");
  }
  Graph g;
  for (auto& toks : lines)
    for (auto& t : toks) {
      VertexId id;
      if (parse_int(t, id)) g.add_vertex(id);
    }
  NameTable names(g);
  EdgeId next = 0;
  for (auto& toks : lines) {
    VertexId a = names.resolve(toks[0]);
    if (toks.size() == 1) continue;  // isolated vertex line
    VertexId b = names.resolve(toks[1]);
    g.add_edge(next++, a, b);
  }
  return g;
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw GraphError("cannot open " + path);
  return read_edge_list(f);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  for (VertexId v : g.vertices())
    if (g.degree(v) == 0) out << v << "\n";
  for (auto& [id, e] : g.edge_map()) out << e.u << " " << e.v << "\n";
}

Graph read_graphml(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw GraphError(std::string("graphml: ") + e.what());
  }
  auto gnode = tree.get_child_optional("graphml.graph");
  if (!gnode) throw GraphError("graphml: missing <graph>");
  Graph g;
  std::vector<std::string> node_ids;
  for (auto& [tag, child] : *gnode)
    if (tag == "node") node_ids.push_back(child.get<std::string>("<xmlattr>.id"));
  auto numeric = [](const std::string& s, VertexId& out) {
    std::string body = (!s.empty() && (s[0] == 'n' || s[0] == 'e')) ? s.substr(1) : s;
    return parse_int(body, out);
  };
  for (auto& s : node_ids) {
    VertexId id;
    if (numeric(s, id)) g.add_vertex(id);
  }
  std::map<std::string, VertexId> ids;
  for (auto& s : node_ids) {
    VertexId id;
    if (numeric(s, id)) {
      ids[s] = id;
    } else {
      ids[s] = g.add_vertex();
      g.set_label(ids[s], s);
    }
  }
  std::vector<std::tuple<std::optional<EdgeId>, std::string, std::string>> raw;
  for (auto& [tag, child] : *gnode) {
    if (tag != "edge") continue;
    auto src = child.get<std::string>("<xmlattr>.source");
    auto dst = child.get<std::string>("<xmlattr>.target");
    std::optional<EdgeId> eid;
    if (auto s = child.get_optional<std::string>("<xmlattr>.id")) {
      EdgeId x;
      if (numeric(*s, x)) eid = x;
    }
    raw.emplace_back(eid, src, dst);
  }
  for (auto& [eid, s, t] : raw) {
    if (!ids.count(s) || !ids.count(t)) throw GraphError("graphml: edge references unknown node");
    if (eid && !g.has_edge(*eid))
      g.add_edge(*eid, ids[s], ids[t]);
    else
      g.add_edge(ids[s], ids[t]);
  }
  return g;
}

void write_graphml(std::ostream& out, const Graph& g) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
  for (VertexId v : g.vertices()) out << "    <node id=\"n" << v << "\"/>\n";
  for (auto& [id, e] : g.edge_map())
    out << "    <edge id=\"e" << id << "\" source=\"n" << e.u << "\" target=\"n" << e.v << "\"/>\n";
  out << "  </graph>\n</graphml>\n";
}

Graph read_graph_file(const std::string& path) {
  auto ends_with = [&](const std::string& suf) {
    return path.size() >= suf.size() &&
           std::equal(suf.rbegin(), suf.rend(), path.rbegin(),
                      [](char a, char b) { return std::tolower(a) == std::tolower(b); });
  };
  if (ends_with(".graphml") || ends_with(".xml")) {
    std::ifstream f(path);
    if (!f) throw GraphError("cannot open " + path);
    return read_graphml(f);
  }
  return read_edge_list_file(path);
}

}  // namespace genuskit
