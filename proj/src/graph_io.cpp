#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <json.hpp>
#include <sstream>

#include "ctscope/error.hpp"
#include "ctscope/graphs.hpp"
#include "ctscope/util.hpp"

namespace ctscope::graphs {

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

struct Annotated {
  std::vector<std::size_t> nodes;  // exported node indices, ascending
  std::vector<std::size_t> edges;  // exported edge indices, in graph order
  std::vector<std::pair<std::string, std::size_t>> component;  // per node index
};

Annotated select(const InteractionGraph& g, const ExportOptions& opts) {
  Annotated a;
  a.component.assign(g.node_count(), {"none", 0});
  std::vector<char> keep(g.node_count(), 1);
  if (opts.component_kind) {
    auto comps = *opts.component_kind == ComponentKind::kWcc ? weakly_connected_components(g)
                                                              : strongly_connected_components(g);
    for (const auto& c : comps) {
      for (auto v : c.nodes) a.component[v] = {std::string(to_string(c.kind)), c.rank};
    }
    if (opts.only_rank) {
      if (*opts.only_rank == 0 || *opts.only_rank > comps.size()) throw DataError("export: no component of that rank");
      std::fill(keep.begin(), keep.end(), 0);
      for (auto v : comps[*opts.only_rank - 1].nodes) keep[v] = 1;
    }
  } else if (opts.only_rank) {
    throw ConfigError("export: a component rank filter needs a component kind");
  }
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    if (keep[v]) a.nodes.push_back(v);
  }
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (keep[g.edges()[e].src] && keep[g.edges()[e].dst]) a.edges.push_back(e);
  }
  return a;
}

std::string sentiment_str(const NodeAttrs& n) { return n.sentiment ? std::string(to_string(*n.sentiment)) : "unknown"; }

}  // namespace

std::string to_graphml(const InteractionGraph& g, const ExportOptions& opts) {
  auto a = select(g, opts);
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"sentiment\" for=\"node\" attr.name=\"sentiment\" attr.type=\"string\"/>\n"
      << "  <key id=\"sentiment_score\" for=\"node\" attr.name=\"sentiment_score\" attr.type=\"double\"/>\n"
      << "  <key id=\"interaction_count\" for=\"node\" attr.name=\"interaction_count\" attr.type=\"long\"/>\n"
      << "  <key id=\"component_kind\" for=\"node\" attr.name=\"component_kind\" attr.type=\"string\"/>\n"
      << "  <key id=\"component_rank\" for=\"node\" attr.name=\"component_rank\" attr.type=\"int\"/>\n"
      << "  <key id=\"friends\" for=\"node\" attr.name=\"friends\" attr.type=\"long\"/>\n"
      << "  <key id=\"followers\" for=\"node\" attr.name=\"followers\" attr.type=\"long\"/>\n"
      << "  <key id=\"external\" for=\"node\" attr.name=\"external\" attr.type=\"boolean\"/>\n"
      << "  <key id=\"timestamp_ms\" for=\"edge\" attr.name=\"timestamp_ms\" attr.type=\"long\"/>\n"
      << "  <key id=\"tweet_id\" for=\"edge\" attr.name=\"tweet_id\" attr.type=\"string\"/>\n"
      << "  <graph id=\"" << g.type().str() << "\" edgedefault=\"directed\">\n";
  for (auto v : a.nodes) {
    const auto& n = g.nodes()[v];
    out << "    <node id=\"" << xml_escape(n.id) << "\">"
        << "<data key=\"sentiment\">" << sentiment_str(n) << "</data>"
        << "<data key=\"sentiment_score\">" << util::format_double(n.sentiment_score.value_or(0.0)) << "</data>"
        << "<data key=\"interaction_count\">" << n.interaction_count << "</data>"
        << "<data key=\"component_kind\">" << a.component[v].first << "</data>"
        << "<data key=\"component_rank\">" << a.component[v].second << "</data>";
    if (n.friends) out << "<data key=\"friends\">" << *n.friends << "</data>";
    if (n.followers) out << "<data key=\"followers\">" << *n.followers << "</data>";
    out << "<data key=\"external\">" << (n.external ? "true" : "false") << "</data></node>\n";
  }
  for (auto ei : a.edges) {
    const auto& e = g.edges()[ei];
    out << "    <edge source=\"" << xml_escape(g.nodes()[e.src].id) << "\" target=\""
        << xml_escape(g.nodes()[e.dst].id) << "\"><data key=\"timestamp_ms\">" << e.timestamp_ms
        << "</data><data key=\"tweet_id\">" << xml_escape(e.tweet_id) << "</data></edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
  return out.str();
}

std::string to_dot(const InteractionGraph& g, const ExportOptions& opts) {
  auto a = select(g, opts);
  std::ostringstream out;
  out << "digraph \"" << g.type().str() << "\" {\n";
  for (auto v : a.nodes) {
    const auto& n = g.nodes()[v];
    out << "  \"" << dot_escape(n.id) << "\" [sentiment=\"" << sentiment_str(n)
        << "\", sentiment_score=" << util::format_double(n.sentiment_score.value_or(0.0))
        << ", interaction_count=" << n.interaction_count << ", component_kind=\"" << a.component[v].first
        << "\", component_rank=" << a.component[v].second << "];\n";
  }
  for (auto ei : a.edges) {
    const auto& e = g.edges()[ei];
    out << "  \"" << dot_escape(g.nodes()[e.src].id) << "\" -> \"" << dot_escape(g.nodes()[e.dst].id)
        << "\" [timestamp_ms=" << e.timestamp_ms << ", tweet_id=\"" << dot_escape(e.tweet_id) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

ParsedGraph parse_graphml(std::string_view xml) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in{std::string(xml)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw DataError(std::string("invalid GraphML: ") + e.what());
  }
  const auto& graph = tree.get_child("graphml.graph");
  auto type = GraphType::parse(graph.get<std::string>("<xmlattr>.id", ""));
  if (!type) throw DataError("GraphML graph id is not a known graph type");

  std::vector<NodeAttrs> nodes;
  std::vector<std::optional<std::pair<ComponentKind, std::size_t>>> comp_by_input;
  std::vector<EdgeSpec> edges;
  for (const auto& [tag, child] : graph) {
    if (tag == "node") {
      NodeAttrs n;
      n.id = child.get<std::string>("<xmlattr>.id");
      std::string kind = "none";
      std::size_t rank = 0;
      for (const auto& [dtag, data] : child) {
        if (dtag != "data") continue;
        auto key = data.get<std::string>("<xmlattr>.key");
        auto val = data.get_value<std::string>();
        if (key == "sentiment") {
          n.sentiment = parse_polarity(val);
        } else if (key == "sentiment_score") {
          n.sentiment_score = util::parse_double(val);
        } else if (key == "interaction_count") {
          n.interaction_count = util::parse_int(val).value_or(0);
        } else if (key == "friends") {
          n.friends = util::parse_int(val);
        } else if (key == "followers") {
          n.followers = util::parse_int(val);
        } else if (key == "external") {
          n.external = val == "true";
        } else if (key == "component_kind") {
          kind = val;
        } else if (key == "component_rank") {
          rank = static_cast<std::size_t>(util::parse_int(val).value_or(0));
        }
      }
      if (!n.sentiment) n.sentiment_score.reset();
      auto ck = parse_component_kind(kind);
      comp_by_input.push_back(ck ? std::optional(std::pair(*ck, rank)) : std::nullopt);
      nodes.push_back(std::move(n));
    } else if (tag == "edge") {
      EdgeSpec e;
      e.src = child.get<std::string>("<xmlattr>.source");
      e.dst = child.get<std::string>("<xmlattr>.target");
      for (const auto& [dtag, data] : child) {
        if (dtag != "data") continue;
        auto key = data.get<std::string>("<xmlattr>.key");
        if (key == "timestamp_ms") e.timestamp_ms = util::parse_int(data.get_value<std::string>()).value_or(0);
        if (key == "tweet_id") e.tweet_id = data.get_value<std::string>();
      }
      edges.push_back(std::move(e));
    }
  }
  std::unordered_map<std::string, std::optional<std::pair<ComponentKind, std::size_t>>> comp_by_id;
  for (std::size_t i = 0; i < nodes.size(); ++i) comp_by_id[nodes[i].id] = comp_by_input[i];
  ParsedGraph out{InteractionGraph(*type, std::move(nodes), edges), {}};
  for (const auto& n : out.graph.nodes()) out.components.push_back(comp_by_id[n.id]);
  return out;
}

std::string profile_csv_header() {
  return "graph,kind,rank,size,reachable_size,interactions,activity_span_ms,"
         "within_count,within_mean_friends,within_median_friends,within_mean_followers,within_median_followers,"
         "reachable_count,reachable_mean_friends,reachable_median_friends,reachable_mean_followers,"
         "reachable_median_followers,linearity_score,bot_flags\n";
}

std::string profile_csv_row(const GraphType& type, const ComponentProfile& p) {
  auto stats = [](const MetaStats& s) {
    if (s.empty) return std::to_string(s.count) + ",,,,";
    return std::to_string(s.count) + "," + std::to_string(s.mean_friends) + "," + std::to_string(s.median_friends) +
           "," + std::to_string(s.mean_followers) + "," + std::to_string(s.median_followers);
  };
  std::string flags;
  for (auto f : p.bot_flags) {
    if (!flags.empty()) flags += ";";
    flags += to_string(f);
  }
  return type.str() + "," + std::string(to_string(p.component.kind)) + "," + std::to_string(p.component.rank) + "," +
         std::to_string(p.component.size()) + "," + std::to_string(p.reachable_set_size) + "," +
         std::to_string(p.interactions) + "," + std::to_string(p.activity_span_ms) + "," + stats(p.within) + "," +
         stats(p.reachable) + "," + (p.linearity ? util::format_double(p.linearity->score) : "") + "," + flags + "\n";
}

std::string curve_csv(const Curve& curve) {
  std::string out = "timestamp_ms,cumulative_count\n";
  for (const auto& [t, c] : curve) out += std::to_string(t) + "," + std::to_string(c) + "\n";
  return out;
}

namespace {

nlohmann::ordered_json summary_json(const Summary& s) {
  return {{"mean", s.mean}, {"std", s.std}, {"median", s.median}, {"max", s.max}};
}

nlohmann::ordered_json meta_json(const MetaStats& s) {
  nlohmann::ordered_json j;
  j["count"] = s.count;
  j["missing"] = s.missing;
  j["empty"] = s.empty;
  if (s.empty) {
    j["mean_friends"] = j["median_friends"] = j["mean_followers"] = j["median_followers"] = nullptr;
  } else {
    j["mean_friends"] = s.mean_friends;
    j["median_friends"] = s.median_friends;
    j["mean_followers"] = s.mean_followers;
    j["median_followers"] = s.median_followers;
  }
  return j;
}

}  // namespace

std::string degree_stats_json(const GraphType& type, const DegreeStats& s) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["graph"] = type.str();
  j["n_nodes"] = s.n_nodes;
  j["n_edges"] = s.n_edges;
  j["empty"] = s.empty;
  j["degree"] = summary_json(s.degree);
  j["in_degree"] = summary_json(s.in_degree);
  j["out_degree"] = summary_json(s.out_degree);
  return j.dump(2) + "\n";
}

std::string profiles_json(const GraphType& type, const InteractionGraph& g, const std::vector<ComponentProfile>& profiles) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& p : profiles) {
    nlohmann::ordered_json j;
    j["graph"] = type.str();
    j["kind"] = to_string(p.component.kind);
    j["rank"] = p.component.rank;
    j["size"] = p.component.size();
    j["reachable_size"] = p.reachable_set_size;
    j["interactions"] = p.interactions;
    j["activity_span_ms"] = p.activity_span_ms;
    j["within"] = meta_json(p.within);
    j["reachable"] = meta_json(p.reachable);
    if (p.linearity) {
      j["linearity_score"] = p.linearity->score;
      j["linearity_flagged"] = p.linearity->flagged;
    } else {
      j["linearity_score"] = nullptr;
      j["linearity_flagged"] = true;
    }
    auto flags = nlohmann::ordered_json::array();
    for (auto f : p.bot_flags) flags.push_back(to_string(f));
    j["bot_flags"] = std::move(flags);
    auto sample = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < std::min<std::size_t>(p.component.nodes.size(), 20); ++i) {
      sample.push_back(g.nodes()[p.component.nodes[i]].id);
    }
    j["member_sample"] = std::move(sample);
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::string membership_csv(const InteractionGraph& g, const std::vector<Component>& components) {
  std::string out = "node_id,kind,rank\n";
  for (const auto& c : components) {
    for (auto v : c.nodes) {
      out += util::csv_escape(g.nodes()[v].id) + "," + std::string(to_string(c.kind)) + "," + std::to_string(c.rank) + "\n";
    }
  }
  return out;
}

}  // namespace ctscope::graphs
