#include "ctscope/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>

#include "ctscope/error.hpp"

namespace ctscope::graphs {

std::string GraphType::str() const {
  return std::string(node_kind == NodeKind::kTweet ? "tweet" : "user") + "-" +
         (edge_kind == EdgeKind::kReply ? "reply" : "quote");
}

std::optional<GraphType> GraphType::parse(std::string_view s) {
  for (const auto& t : all_graph_types()) {
    if (t.str() == s) return t;
  }
  return std::nullopt;
}

InteractionGraph::InteractionGraph(GraphType type, std::vector<NodeAttrs> nodes, const std::vector<EdgeSpec>& edges)
    : type_(type), nodes_(std::move(nodes)) {
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!seen.emplace(nodes_[i].id, i).second) throw DataError("duplicate node id " + nodes_[i].id);
  }
  for (const auto& e : edges) {
    for (const auto* id : {&e.src, &e.dst}) {
      if (seen.emplace(*id, nodes_.size()).second) {
        NodeAttrs n;
        n.id = *id;
        nodes_.push_back(std::move(n));
      }
    }
  }
  std::sort(nodes_.begin(), nodes_.end(), [](const NodeAttrs& a, const NodeAttrs& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < nodes_.size(); ++i) index_.emplace(nodes_[i].id, i);
  out_.resize(nodes_.size());
  in_.resize(nodes_.size());
  edges_.reserve(edges.size());
  for (const auto& e : edges) {
    Edge edge{index_.at(e.src), index_.at(e.dst), e.timestamp_ms, e.tweet_id};
    out_[edge.src].push_back(edge.dst);
    in_[edge.dst].push_back(edge.src);
    edges_.push_back(std::move(edge));
  }
}

std::optional<std::size_t> InteractionGraph::find(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

InteractionGraph simple_projection(const InteractionGraph& g) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<EdgeSpec> edges;
  for (const auto& e : g.edges()) {
    if (!seen.emplace(e.src, e.dst).second) continue;
    edges.push_back({g.nodes()[e.src].id, g.nodes()[e.dst].id, e.timestamp_ms, e.tweet_id});
  }
  return InteractionGraph(g.type(), g.nodes(), edges);
}

std::int64_t interaction_count(const ingest::RawTweet& t) {
  return t.retweet_count + t.favorite_count + t.reply_count + t.quote_count;
}

namespace {

struct UserAgg {
  std::int64_t interactions = 0;
  std::int64_t latest_ts = -1;
  std::string latest_id;
  std::optional<std::int64_t> friends, followers;
  double signed_sum = 0.0;
  std::size_t labelled = 0;
  std::array<std::size_t, 3> votes{};
};

}  // namespace

InteractionGraph build_graph(const std::vector<ingest::CleanTweet>& tweets, GraphType type,
                             const std::vector<sentiment::SentimentLabel>& labels, BuildReport* report) {
  if (!labels.empty() && labels.size() != tweets.size()) throw ShapeError("labels must be parallel to tweets");
  BuildReport local;
  BuildReport& rep = report ? *report : local;
  rep = BuildReport{};

  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    if (!tweets[i].is_retweet) by_id.emplace(tweets[i].id, i);
  }

  std::vector<EdgeSpec> edges;
  std::set<std::string> endpoints;
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    const auto& t = tweets[i];
    if (t.is_retweet) {
      ++rep.retweets_skipped;
      continue;
    }
    const auto& status = type.edge_kind == EdgeKind::kReply ? t.in_reply_to_status_id : t.quoted_status_id;
    const auto& user = type.edge_kind == EdgeKind::kReply ? t.in_reply_to_user_id : t.quoted_status_user_id;
    if (!status && !user) continue;
    if (!status || !user) {
      ++rep.malformed_references;
      continue;
    }
    EdgeSpec e;
    e.timestamp_ms = t.timestamp_ms;
    e.tweet_id = t.id;
    if (type.node_kind == NodeKind::kTweet) {
      if (*status == t.id) {
        ++rep.self_references;
        continue;
      }
      e.src = t.id;
      e.dst = *status;
    } else {
      e.src = *user;
      e.dst = t.user_id;
    }
    endpoints.insert(e.src);
    endpoints.insert(e.dst);
    edges.push_back(std::move(e));
  }

  std::vector<NodeAttrs> nodes;
  nodes.reserve(endpoints.size());
  if (type.node_kind == NodeKind::kTweet) {
    for (const auto& id : endpoints) {
      NodeAttrs n;
      n.id = id;
      auto it = by_id.find(id);
      if (it == by_id.end()) {
        n.external = true;
        ++rep.external_targets;
      } else {
        const auto& t = tweets[it->second];
        n.interaction_count = interaction_count(t);
        n.friends = t.user_friends_count;
        n.followers = t.user_followers_count;
        if (!labels.empty()) {
          n.sentiment = labels[it->second].label;
          n.sentiment_score = labels[it->second].signed_score();
        }
      }
      nodes.push_back(std::move(n));
    }
  } else {
    std::unordered_map<std::string, UserAgg> users;
    for (std::size_t i = 0; i < tweets.size(); ++i) {
      const auto& t = tweets[i];
      if (t.is_retweet || !endpoints.count(t.user_id)) continue;
      auto& u = users[t.user_id];
      u.interactions += interaction_count(t);
      if (t.timestamp_ms > u.latest_ts || (t.timestamp_ms == u.latest_ts && t.id > u.latest_id)) {
        u.latest_ts = t.timestamp_ms;
        u.latest_id = t.id;
        u.friends = t.user_friends_count;
        u.followers = t.user_followers_count;
      }
      if (!labels.empty()) {
        u.signed_sum += labels[i].signed_score();
        ++u.labelled;
        ++u.votes[static_cast<std::size_t>(labels[i].label)];
      }
    }
    for (const auto& id : endpoints) {
      NodeAttrs n;
      n.id = id;
      auto it = users.find(id);
      if (it == users.end()) {
        n.external = true;
        ++rep.external_targets;
      } else {
        const auto& u = it->second;
        n.interaction_count = u.interactions;
        n.friends = u.friends;
        n.followers = u.followers;
        if (u.labelled) {
          n.sentiment_score = u.signed_sum / static_cast<double>(u.labelled);
          std::array<double, 3> v{static_cast<double>(u.votes[0]), static_cast<double>(u.votes[1]),
                                  static_cast<double>(u.votes[2])};
          n.sentiment = sentiment::argmax_label(v);
        }
      }
      nodes.push_back(std::move(n));
    }
  }
  InteractionGraph g(type, std::move(nodes), edges);
  if (type.node_kind == NodeKind::kTweet) {
    for (std::size_t v = 0; v < g.node_count(); ++v) {
      if (!g.nodes()[v].external && g.out(v).size() > 1) {
        throw DataError("tweet " + g.nodes()[v].id + " has more than one outgoing " + type.str() + " edge");
      }
    }
  }
  return g;
}

namespace {

Summary summarize(std::vector<std::int64_t> v) {
  Summary s;
  if (v.empty()) return s;
  double n = static_cast<double>(v.size());
  double sum = 0.0;
  for (auto x : v) sum += static_cast<double>(x);
  s.mean = sum / n;
  double ss = 0.0;
  for (auto x : v) ss += (static_cast<double>(x) - s.mean) * (static_cast<double>(x) - s.mean);
  s.std = std::sqrt(ss / n);
  std::sort(v.begin(), v.end());
  s.median = v[(v.size() - 1) / 2];
  s.max = v.back();
  return s;
}

}  // namespace

DegreeStats degree_stats(const InteractionGraph& g) {
  DegreeStats s;
  s.n_nodes = g.node_count();
  s.n_edges = g.edge_count();
  if (s.n_nodes == 0) {
    s.empty = true;
    return s;
  }
  std::vector<std::int64_t> in(s.n_nodes, 0), out(s.n_nodes, 0), deg(s.n_nodes, 0);
  for (const auto& e : g.edges()) {
    ++out[e.src];
    ++in[e.dst];
  }
  for (std::size_t i = 0; i < s.n_nodes; ++i) deg[i] = in[i] + out[i];
  s.degree = summarize(deg);
  s.in_degree = summarize(in);
  s.out_degree = summarize(out);
  return s;
}

std::string_view to_string(ComponentKind k) { return k == ComponentKind::kWcc ? "wcc" : "scc"; }

std::optional<ComponentKind> parse_component_kind(std::string_view s) {
  if (s == "wcc") return ComponentKind::kWcc;
  if (s == "scc") return ComponentKind::kScc;
  return std::nullopt;
}

namespace {

std::vector<Component> rank_components(ComponentKind kind, std::vector<std::vector<std::size_t>> groups) {
  for (auto& g : groups) std::sort(g.begin(), g.end());
  std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  std::vector<Component> out;
  out.reserve(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) out.push_back({kind, i + 1, std::move(groups[i])});
  return out;
}

}  // namespace

std::vector<Component> weakly_connected_components(const InteractionGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& e : g.edges()) {
    auto a = find(e.src), b = find(e.dst);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t v = 0; v < n; ++v) groups[find(v)].push_back(v);
  std::vector<std::vector<std::size_t>> list;
  for (auto& [root, members] : groups) list.push_back(std::move(members));
  return rank_components(ComponentKind::kWcc, std::move(list));
}

std::vector<Component> strongly_connected_components(const InteractionGraph& g) {
  const std::size_t n = g.node_count();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> calls;  // (node, next out position)
  std::vector<std::vector<std::size_t>> groups;
  std::size_t counter = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    calls.emplace_back(root, 0);
    while (!calls.empty()) {
      auto& [v, pos] = calls.back();
      const auto& adj = g.out(v);
      if (pos < adj.size()) {
        std::size_t w = adj[pos++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          calls.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      std::size_t done = v;
      if (low[done] == index[done]) {
        std::vector<std::size_t> comp;
        while (true) {
          std::size_t w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
          if (w == done) break;
        }
        groups.push_back(std::move(comp));
      }
      calls.pop_back();
      if (!calls.empty()) {
        std::size_t parent = calls.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
    }
  }
  return rank_components(ComponentKind::kScc, std::move(groups));
}

std::vector<std::size_t> reachable_set(const InteractionGraph& g, std::span<const std::size_t> seeds) {
  std::vector<char> seed(g.node_count(), 0), seen(g.node_count(), 0);
  std::deque<std::size_t> queue;
  for (auto s : seeds) {
    if (s >= g.node_count()) throw DataError("reachable_set: seed index out of range");
    seed[s] = 1;
    if (!seen[s]) {
      seen[s] = 1;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    for (auto w : g.out(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    if (seen[v] && !seed[v]) out.push_back(v);
  }
  return out;
}

std::vector<std::size_t> reachable_set(const InteractionGraph& g, const std::vector<std::string>& seed_ids) {
  std::vector<std::size_t> seeds;
  for (const auto& id : seed_ids) {
    auto v = g.find(id);
    if (!v) throw DataError("reachable_set: unknown seed id " + id);
    seeds.push_back(*v);
  }
  return reachable_set(g, seeds);
}

std::int64_t round_half_up(double v) { return static_cast<std::int64_t>(std::floor(v + 0.5)); }

MetaStats meta_stats(const InteractionGraph& g, std::span<const std::size_t> nodes) {
  MetaStats s;
  std::vector<std::int64_t> fr, fo;
  for (auto v : nodes) {
    const auto& n = g.nodes()[v];
    if (!n.friends || !n.followers) {
      ++s.missing;
      continue;
    }
    fr.push_back(*n.friends);
    fo.push_back(*n.followers);
  }
  s.count = fr.size();
  if (fr.empty()) return s;
  s.empty = false;
  auto mean = [](const std::vector<std::int64_t>& v) {
    double sum = 0.0;
    for (auto x : v) sum += static_cast<double>(x);
    return sum / static_cast<double>(v.size());
  };
  auto median = [](std::vector<std::int64_t> v) {
    std::sort(v.begin(), v.end());
    return v[(v.size() - 1) / 2];
  };
  s.mean_friends_exact = mean(fr);
  s.mean_followers_exact = mean(fo);
  s.mean_friends = round_half_up(s.mean_friends_exact);
  s.mean_followers = round_half_up(s.mean_followers_exact);
  s.median_friends = median(fr);
  s.median_followers = median(fo);
  return s;
}

std::string_view to_string(BotFlag f) {
  switch (f) {
    case BotFlag::kLinearGrowth: return "linear_growth";
    case BotFlag::kFlatWithinVsReachable: return "flat_within_vs_reachable";
    case BotFlag::kZeroMetadata: return "zero_metadata";
    case BotFlag::kShortBurst: return "short_burst";
  }
  return "";
}

Linearity linearity_score(const Curve& curve) {
  if (curve.size() < 3) throw DataError("linearity_score needs at least 3 points");
  const double n = static_cast<double>(curve.size());
  const double t0 = static_cast<double>(curve.front().first);
  double mx = 0.0, my = 0.0;
  for (const auto& [t, c] : curve) {
    mx += static_cast<double>(t) - t0;
    my += static_cast<double>(c);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& [t, c] : curve) {
    double dx = static_cast<double>(t) - t0 - mx;
    double dy = static_cast<double>(c) - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (syy == 0.0) return {1.0, true};
  if (sxx == 0.0) return {0.0, true};
  double r2 = (sxy * sxy) / (sxx * syy);
  return {std::clamp(r2, 0.0, 1.0), false};
}

Curve resample_curve(const Curve& curve, std::int64_t step_ms) {
  if (step_ms <= 0) throw ConfigError("resample step must be positive");
  Curve out;
  if (curve.empty()) return out;
  std::size_t j = 0;
  std::size_t value = 0;
  for (std::int64_t t = curve.front().first;; t += step_ms) {
    while (j < curve.size() && curve[j].first <= t) value = curve[j++].second;
    out.emplace_back(t, value);
    if (t >= curve.back().first) break;
  }
  return out;
}

ComponentProfile profile_component(const InteractionGraph& g, const Component& c, const BotThresholds& th) {
  if (c.nodes.empty()) throw DataError("profile_component: empty component");
  ComponentProfile p;
  p.component = c;
  p.within = meta_stats(g, c.nodes);
  auto reach = reachable_set(g, c.nodes);
  p.reachable_set_size = reach.size();
  p.reachable = meta_stats(g, reach);

  std::vector<char> member(g.node_count(), 0);
  for (auto v : c.nodes) member[v] = 1;
  std::vector<std::int64_t> ts;
  for (const auto& e : g.edges()) {
    if (member[e.src] || member[e.dst]) ts.push_back(e.timestamp_ms);
  }
  std::sort(ts.begin(), ts.end());
  p.interactions = ts.size();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i + 1 < ts.size() && ts[i + 1] == ts[i]) continue;
    p.temporal_curve.emplace_back(ts[i], i + 1);
  }
  if (!ts.empty()) p.activity_span_ms = ts.back() - ts.front();
  if (p.temporal_curve.size() >= 3) p.linearity = linearity_score(p.temporal_curve);

  if (p.linearity && p.temporal_curve.size() >= th.linear_min_points && p.linearity->score >= th.linear_min_score) {
    p.bot_flags.insert(BotFlag::kLinearGrowth);
  }
  if (!p.within.empty && !p.reachable.empty) {
    auto flat = [&](double w, double r) { return std::abs(w - r) <= th.flat_tolerance * std::max(w, 1.0); };
    if (flat(p.within.mean_friends_exact, p.reachable.mean_friends_exact) &&
        flat(p.within.mean_followers_exact, p.reachable.mean_followers_exact)) {
      p.bot_flags.insert(BotFlag::kFlatWithinVsReachable);
    }
  }
  if (!p.within.empty && p.within.mean_friends == 0 && p.within.median_friends == 0 && p.within.mean_followers == 0 &&
      p.within.median_followers == 0) {
    p.bot_flags.insert(BotFlag::kZeroMetadata);
  }
  if (p.interactions >= th.burst_min_interactions && p.activity_span_ms <= th.burst_max_span_ms) {
    p.bot_flags.insert(BotFlag::kShortBurst);
  }
  return p;
}

}  // namespace ctscope::graphs
