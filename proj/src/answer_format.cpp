#include "graphdc/answer_format.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <set>

namespace graphdc {

void ComponentGrouping::canonicalize() {
  for (auto& g : groups) std::sort(g.begin(), g.end());
  std::sort(groups.begin(), groups.end());
}

Distance DistanceTable::at(NodeId a, NodeId b) const {
  auto it = entries.find({std::min(a, b), std::max(a, b)});
  if (it == entries.end()) {
    throw std::out_of_range("no distance for pair (" + std::to_string(a) + "," +
                            std::to_string(b) + ")");
  }
  return it->second;
}

TaskKind payload_task(const SubPayload& payload) {
  switch (payload.index()) {
    case 0:
      return TaskKind::Connectivity;
    case 1:
      return TaskKind::ShortestPath;
    case 2:
      return TaskKind::Cycle;
    default:
      return TaskKind::TriangleCount;
  }
}

namespace {

std::string groups_text(const ComponentGrouping& g) {
  std::string out = "[";
  for (std::size_t i = 0; i < g.groups.size(); ++i) {
    if (i) out += ',';
    out += '[';
    for (std::size_t j = 0; j < g.groups[i].size(); ++j) {
      if (j) out += ',';
      out += std::to_string(g.groups[i][j]);
    }
    out += ']';
  }
  return out + "]";
}

// ---- value grammar -------------------------------------------------------

struct Value {
  enum class Kind { Int, Word, List, Tuple } kind = Kind::Int;
  std::uint64_t number = 0;
  std::string word;
  std::vector<Value> items;
};

class ValueParser {
 public:
  explicit ValueParser(std::string_view text) : s_(text) {}

  // key=value fields separated by ';'; a bare word is stored under key "".
  std::optional<std::vector<std::pair<std::string, Value>>> fields() {
    std::vector<std::pair<std::string, Value>> out;
    skip_ws();
    if (at_end()) return std::nullopt;
    while (true) {
      skip_ws();
      auto key = word();
      if (!key) return std::nullopt;
      skip_ws();
      if (peek('=')) {
        ++pos_;
        auto v = value();
        if (!v) return std::nullopt;
        out.emplace_back(*key, std::move(*v));
      } else {
        Value bare;
        bare.kind = Value::Kind::Word;
        bare.word = *key;
        out.emplace_back("", std::move(bare));
      }
      skip_ws();
      if (at_end()) return out;
      if (!peek(';')) return std::nullopt;
      ++pos_;
    }
  }

 private:
  bool at_end() const { return pos_ >= s_.size(); }
  bool peek(char c) const { return !at_end() && s_[pos_] == c; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::optional<std::string> word() {
    std::size_t start = pos_;
    while (!at_end() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) return std::nullopt;
    std::string w(s_.substr(start, pos_ - start));
    for (auto& c : w) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return w;
  }

  std::optional<Value> value() {
    skip_ws();
    if (at_end()) return std::nullopt;
    const char c = s_[pos_];
    if (c == '[' || c == '(') {
      const char close = c == '[' ? ']' : ')';
      ++pos_;
      Value v;
      v.kind = c == '[' ? Value::Kind::List : Value::Kind::Tuple;
      skip_ws();
      if (peek(close)) {
        ++pos_;
        return v;
      }
      while (true) {
        auto item = value();
        if (!item) return std::nullopt;
        v.items.push_back(std::move(*item));
        skip_ws();
        if (peek(close)) {
          ++pos_;
          return v;
        }
        if (!peek(',')) return std::nullopt;
        ++pos_;
      }
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Value v;
      auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v.number);
      if (ec != std::errc()) return std::nullopt;
      pos_ = static_cast<std::size_t>(ptr - s_.data());
      return v;
    }
    auto w = word();
    if (!w) return std::nullopt;
    Value v;
    v.kind = Value::Kind::Word;
    v.word = *w;
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

using Fields = std::vector<std::pair<std::string, Value>>;

const Value* field(const Fields& fields, std::string_view key) {
  const Value* found = nullptr;
  for (const auto& [k, v] : fields) {
    if (k == key) {
      if (found) return nullptr;  // repeated key
      found = &v;
    }
  }
  return found;
}

bool only_keys(const Fields& fields, std::initializer_list<std::string_view> keys) {
  if (fields.size() != keys.size()) return false;
  return std::all_of(keys.begin(), keys.end(), [&](auto k) { return field(fields, k) != nullptr; });
}

bool is_sequence(const Value& v) {
  return v.kind == Value::Kind::List || v.kind == Value::Kind::Tuple;
}

std::optional<NodeId> node_of(const Value& v) {
  if (v.kind != Value::Kind::Int || v.number > UINT32_MAX) return std::nullopt;
  return static_cast<NodeId>(v.number);
}

std::optional<bool> verdict_of(const Value& v) {
  if (v.kind != Value::Kind::Word) return std::nullopt;
  if (v.word == "yes" || v.word == "true") return true;
  if (v.word == "no" || v.word == "false") return false;
  return std::nullopt;
}

std::optional<Distance> distance_of(const Value& v) {
  if (v.kind == Value::Kind::Int) return Distance::of(v.number);
  if (v.kind == Value::Kind::Word && (v.word == "unreachable" || v.word == "inf")) {
    return Distance::unreachable();
  }
  return std::nullopt;
}

std::optional<ComponentGrouping> grouping_of(const Value& v) {
  if (v.kind != Value::Kind::List) return std::nullopt;
  ComponentGrouping g;
  for (const auto& item : v.items) {
    if (!is_sequence(item)) return std::nullopt;
    std::vector<NodeId> group;
    for (const auto& n : item.items) {
      auto id = node_of(n);
      if (!id) return std::nullopt;
      group.push_back(*id);
    }
    g.groups.push_back(std::move(group));
  }
  g.canonicalize();
  return g;
}

std::optional<std::vector<NodePair>> pairs_of(const Value& v) {
  if (v.kind != Value::Kind::List) return std::nullopt;
  std::vector<NodePair> out;
  for (const auto& item : v.items) {
    if (!is_sequence(item) || item.items.size() != 2) return std::nullopt;
    auto a = node_of(item.items[0]);
    auto b = node_of(item.items[1]);
    if (!a || !b) return std::nullopt;
    out.emplace_back(std::min(*a, *b), std::max(*a, *b));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<SubPayload> interpret(const Fields& f, TaskKind task) {
  switch (task) {
    case TaskKind::Connectivity: {
      if (!only_keys(f, {"connected_groups"})) return std::nullopt;
      auto g = grouping_of(*field(f, "connected_groups"));
      if (!g) return std::nullopt;
      return SubPayload{*g};
    }
    case TaskKind::ShortestPath: {
      if (!only_keys(f, {"distances"})) return std::nullopt;
      const Value& list = *field(f, "distances");
      if (list.kind != Value::Kind::List) return std::nullopt;
      DistanceTable table;
      for (const auto& item : list.items) {
        if (!is_sequence(item) || item.items.size() != 3) return std::nullopt;
        auto a = node_of(item.items[0]);
        auto b = node_of(item.items[1]);
        auto d = distance_of(item.items[2]);
        if (!a || !b || !d) return std::nullopt;
        NodePair key{std::min(*a, *b), std::max(*a, *b)};
        auto [it, inserted] = table.entries.emplace(key, *d);
        if (!inserted && it->second != *d) return std::nullopt;
      }
      return SubPayload{table};
    }
    case TaskKind::Cycle: {
      if (!only_keys(f, {"cycle", "components"})) return std::nullopt;
      auto verdict = verdict_of(*field(f, "cycle"));
      auto g = grouping_of(*field(f, "components"));
      if (!verdict || !g) return std::nullopt;
      return SubPayload{CycleSummary{*verdict, *g}};
    }
    case TaskKind::TriangleCount: {
      if (!only_keys(f, {"triangles", "exit_edges"})) return std::nullopt;
      const Value& count = *field(f, "triangles");
      auto edges = pairs_of(*field(f, "exit_edges"));
      if (count.kind != Value::Kind::Int || !edges) return std::nullopt;
      return SubPayload{TriangleSummary{count.number, *edges}};
    }
  }
  return std::nullopt;
}

std::optional<Answer> interpret_final(const Fields& f, TaskKind task) {
  switch (task) {
    case TaskKind::Connectivity:
    case TaskKind::Cycle: {
      if (f.size() != 1 || !f[0].first.empty()) return std::nullopt;
      auto verdict = verdict_of(f[0].second);
      if (!verdict) return std::nullopt;
      return Answer{YesNo{*verdict}};
    }
    case TaskKind::ShortestPath: {
      if (!only_keys(f, {"distance"})) return std::nullopt;
      auto d = distance_of(*field(f, "distance"));
      if (!d) return std::nullopt;
      return Answer{*d};
    }
    case TaskKind::TriangleCount: {
      if (!only_keys(f, {"triangles"})) return std::nullopt;
      const Value& v = *field(f, "triangles");
      if (v.kind != Value::Kind::Int) return std::nullopt;
      return Answer{Count{v.number}};
    }
  }
  return std::nullopt;
}

// Returns the text after "ANSWER:" if the line is an answer line. Tolerates
// surrounding whitespace, markdown emphasis, and a trailing period.
std::optional<std::string_view> answer_body(std::string_view line) {
  auto strip = [](std::string_view s, std::string_view chars) {
    while (!s.empty() && chars.find(s.front()) != std::string_view::npos) s.remove_prefix(1);
    while (!s.empty() && chars.find(s.back()) != std::string_view::npos) s.remove_suffix(1);
    return s;
  };
  line = strip(line, " \t\r*`>#");
  constexpr std::string_view kTag = "answer:";
  if (line.size() < kTag.size()) return std::nullopt;
  for (std::size_t i = 0; i < kTag.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(line[i])) != kTag[i]) return std::nullopt;
  }
  return strip(line.substr(kTag.size()), " \t*`.");
}

template <typename T, typename Interpret>
std::optional<T> last_matching_line(std::string_view raw, Interpret interpret_fields) {
  std::size_t end = raw.size();
  while (true) {
    const std::size_t nl = end == 0 ? std::string_view::npos : raw.rfind('\n', end - 1);
    const std::size_t begin = nl == std::string_view::npos ? 0 : nl + 1;
    if (auto body = answer_body(raw.substr(begin, end - begin))) {
      if (auto f = ValueParser(*body).fields()) {
        if (auto parsed = interpret_fields(*f)) return parsed;
      }
    }
    if (nl == std::string_view::npos) return std::nullopt;
    end = nl;
  }
}

void fail(const std::string& what) { throw ExtractionError(what, ""); }

void check_grouping(const ComponentGrouping& g, std::span<const NodeId> terminals,
                    const std::string& label) {
  std::set<NodeId> seen;
  for (const auto& group : g.groups) {
    if (group.empty()) fail(label + " contains an empty group");
    for (NodeId v : group) {
      if (!seen.insert(v).second) fail(label + " lists node " + std::to_string(v) + " twice");
      if (!std::binary_search(terminals.begin(), terminals.end(), v)) {
        fail(label + " lists node " + std::to_string(v) + " which is not a terminal");
      }
    }
  }
  if (seen.size() != terminals.size()) fail(label + " omits a terminal");
}

}  // namespace

std::string format_payload(const SubPayload& payload) {
  struct Visitor {
    std::string operator()(const ComponentGrouping& g) const {
      return "connected_groups=" + groups_text(g);
    }
    std::string operator()(const DistanceTable& t) const {
      std::string out = "distances=[";
      bool first = true;
      for (const auto& [pair, d] : t.entries) {
        if (!first) out += ',';
        first = false;
        out += "(" + std::to_string(pair.first) + "," + std::to_string(pair.second) + "," +
               to_string(d) + ")";
      }
      return out + "]";
    }
    std::string operator()(const CycleSummary& c) const {
      return std::string("cycle=") + (c.has_intra_cycle ? "yes" : "no") +
             "; components=" + groups_text(c.exit_components);
    }
    std::string operator()(const TriangleSummary& t) const {
      std::string out = "triangles=" + std::to_string(t.intra_count) + "; exit_edges=[";
      for (std::size_t i = 0; i < t.exit_induced_edges.size(); ++i) {
        if (i) out += ',';
        out += "(" + std::to_string(t.exit_induced_edges[i].first) + "," +
               std::to_string(t.exit_induced_edges[i].second) + ")";
      }
      return out + "]";
    }
  };
  return std::visit(Visitor{}, payload);
}

std::string format_answer_line(const SubPayload& payload) {
  return "ANSWER: " + format_payload(payload);
}

std::string format_answer_line(const Answer& answer) { return "ANSWER: " + to_string(answer); }

void validate_payload(const SubPayload& payload, TaskKind task, std::span<const NodeId> terminals) {
  if (payload_task(payload) != task) fail("payload kind does not match task " + to_string(task));
  if (const auto* g = std::get_if<ComponentGrouping>(&payload)) {
    check_grouping(*g, terminals, "connected_groups");
  } else if (const auto* t = std::get_if<DistanceTable>(&payload)) {
    for (const auto& [pair, d] : t->entries) {
      if (pair.first == pair.second) fail("distance table has a diagonal entry");
      for (NodeId v : {pair.first, pair.second}) {
        if (!std::binary_search(terminals.begin(), terminals.end(), v)) {
          fail("distance table names non-terminal " + std::to_string(v));
        }
      }
      if (d.reachable() && d.value() < 1) fail("distance table has a zero distance");
    }
    const std::size_t k = terminals.size();
    if (t->entries.size() != k * (k - (k > 0 ? 1 : 0)) / 2) {
      fail("distance table does not cover every terminal pair");
    }
  } else if (const auto* c = std::get_if<CycleSummary>(&payload)) {
    check_grouping(c->exit_components, terminals, "components");
  } else if (const auto* tri = std::get_if<TriangleSummary>(&payload)) {
    std::set<NodePair> seen;
    for (const auto& [a, b] : tri->exit_induced_edges) {
      if (a == b) fail("exit_edges contains a self-loop");
      if (!seen.emplace(a, b).second) fail("exit_edges repeats an edge");
      for (NodeId v : {a, b}) {
        if (!std::binary_search(terminals.begin(), terminals.end(), v)) {
          fail("exit_edges names non-exit node " + std::to_string(v));
        }
      }
    }
  }
}

SubPayload extract(std::string_view raw, TaskKind task, std::span<const NodeId> terminals) {
  auto payload = last_matching_line<SubPayload>(
      raw, [task](const Fields& f) { return interpret(f, task); });
  if (!payload) {
    throw ExtractionError("no parsable ANSWER line for task " + to_string(task), std::string(raw));
  }
  try {
    validate_payload(*payload, task, terminals);
  } catch (const ExtractionError& e) {
    throw ExtractionError(e.what(), std::string(raw));
  }
  return *payload;
}

Answer extract_final_answer(std::string_view raw, TaskKind task) {
  auto answer = last_matching_line<Answer>(
      raw, [task](const Fields& f) { return interpret_final(f, task); });
  if (!answer) {
    throw ExtractionError("no parsable final ANSWER line for task " + to_string(task),
                          std::string(raw));
  }
  return *answer;
}

std::string answer_format_instructions(TaskKind task) {
  const std::string lead =
      "You may reason step by step first. End your reply with exactly one line of the form:\n";
  switch (task) {
    case TaskKind::Connectivity:
      return lead +
             "ANSWER: connected_groups=[[a,b,...],[c,...]]\n"
             "Each inner list is one group of terminal nodes that are connected to each other "
             "inside this subgraph. Every terminal appears in exactly one group.";
    case TaskKind::ShortestPath:
      return lead +
             "ANSWER: distances=[(a,b,d),...]\n"
             "List every requested pair once, with d the shortest distance inside this subgraph, "
             "or the word unreachable if no path exists inside it.";
    case TaskKind::Cycle:
      return lead +
             "ANSWER: cycle=yes|no; components=[[a,b,...],[c,...]]\n"
             "components groups the exit nodes by connected component inside this subgraph; "
             "write components=[] when there are no exit nodes.";
    case TaskKind::TriangleCount:
      return lead +
             "ANSWER: triangles=N; exit_edges=[(a,b),...]\n"
             "N counts triangles whose three nodes all lie in this subgraph; exit_edges lists "
             "the edges joining two exit nodes (write exit_edges=[] if there are none).";
  }
  return lead;
}

std::string final_answer_format_instructions(TaskKind task) {
  const std::string lead = "End your reply with exactly one line of the form:\n";
  switch (task) {
    case TaskKind::Connectivity:
    case TaskKind::Cycle:
      return lead + "ANSWER: yes\nor\nANSWER: no";
    case TaskKind::ShortestPath:
      return lead + "ANSWER: distance=D\nwhere D is the total weight of the shortest path, or "
                    "ANSWER: distance=unreachable if there is no path.";
    case TaskKind::TriangleCount:
      return lead + "ANSWER: triangles=N";
  }
  return lead;
}

}  // namespace graphdc
