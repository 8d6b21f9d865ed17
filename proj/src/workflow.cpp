#include "biokg/workflow.hpp"

#include <algorithm>
#include <future>
#include <queue>
#include <set>

#include "biokg/text.hpp"

namespace biokg {

namespace {

struct OpInfo {
  StepOp op;
  const char* name;
};

constexpr OpInfo kOps[] = {
    {StepOp::lookup, "lookup"},         {StepOp::traverse, "traverse"},
    {StepOp::filter, "filter"},         {StepOp::intersect, "intersect"},
    {StepOp::union_, "union"},          {StepOp::difference, "difference"},
    {StepOp::anti_join, "anti_join"},   {StepOp::limit, "limit"},
};

[[noreturn]] void step_error(const std::string& id, const std::string& what) {
  throw ValidationError("step '" + id + "': " + what);
}

class ParamReader {
 public:
  ParamReader(const std::string& step_id, const Json& params)
      : id_(step_id), params_(params) {
    if (!params_.is_object()) step_error(id_, "'params' must be an object");
  }

  std::optional<std::string> opt_string(const char* key) {
    used_.insert(key);
    if (!params_.contains(key)) return std::nullopt;
    if (!params_.at(key).is_string()) step_error(id_, std::string("'") + key + "' must be a string");
    return params_.at(key).get<std::string>();
  }

  std::string req_string(const char* key) {
    auto v = opt_string(key);
    if (!v || v->empty()) step_error(id_, std::string("missing parameter '") + key + "'");
    return *v;
  }

  std::optional<long long> opt_int(const char* key) {
    used_.insert(key);
    if (!params_.contains(key)) return std::nullopt;
    if (!params_.at(key).is_number_integer()) {
      step_error(id_, std::string("'") + key + "' must be an integer");
    }
    return params_.at(key).get<long long>();
  }

  KindFilter opt_kinds(const char* key) {
    used_.insert(key);
    if (!params_.contains(key)) return std::nullopt;
    const auto& v = params_.at(key);
    if (!v.is_array()) step_error(id_, std::string("'") + key + "' must be a list of strings");
    std::set<std::string> kinds;
    for (const auto& k : v) {
      if (!k.is_string()) step_error(id_, std::string("'") + key + "' must be a list of strings");
      kinds.insert(k.get<std::string>());
    }
    return kinds;
  }

  void finish() {
    for (const auto& [k, v] : params_.items()) {
      if (!used_.count(k)) step_error(id_, "unknown parameter '" + k + "'");
    }
  }

 private:
  const std::string& id_;
  const Json& params_;
  std::set<std::string> used_;
};

StepParams parse_params(const Step& step, const Json& params) {
  ParamReader r(step.id, params);
  StepParams out;
  switch (step.op) {
    case StepOp::lookup: {
      LookupParams p{r.opt_string("collection"), r.opt_string("label")};
      if (!p.collection && !p.label) step_error(step.id, "lookup needs 'collection' or 'label'");
      out = p;
      break;
    }
    case StepOp::traverse: {
      TraverseParams p;
      p.edge_kinds = r.opt_kinds("edge_kinds");
      if (auto d = r.opt_string("direction")) {
        try {
          p.direction = parse_direction(*d);
        } catch (const ValidationError& e) {
          step_error(step.id, e.what());
        }
      }
      if (auto depth = r.opt_int("depth")) {
        if (*depth < 1) step_error(step.id, "'depth' must be >= 1");
        p.depth = static_cast<std::size_t>(*depth);
      }
      p.target_collection = r.opt_string("target_collection");
      out = p;
      break;
    }
    case StepOp::filter: {
      FilterParams p;
      p.key = r.req_string("key");
      const auto cmp = r.req_string("comparator");
      if (cmp == "eq") {
        p.comparator = Comparator::eq;
      } else if (cmp == "contains") {
        p.comparator = Comparator::contains;
      } else if (cmp == "exists") {
        p.comparator = Comparator::exists;
      } else {
        step_error(step.id, "unknown comparator '" + cmp + "'");
      }
      auto value = r.opt_string("value");
      if (p.comparator != Comparator::exists && !value) {
        step_error(step.id, "missing parameter 'value'");
      }
      p.value = value.value_or("");
      out = p;
      break;
    }
    case StepOp::anti_join: {
      AntiJoinParams p;
      p.excluded_collection = r.req_string("excluded_collection");
      p.edge_kinds = r.opt_kinds("edge_kinds");
      out = p;
      break;
    }
    case StepOp::limit: {
      auto n = r.opt_int("n");
      if (!n) step_error(step.id, "missing parameter 'n'");
      if (*n < 0) step_error(step.id, "'n' must be >= 0");
      out = LimitParams{static_cast<std::size_t>(*n)};
      break;
    }
    case StepOp::intersect:
    case StepOp::union_:
    case StepOp::difference:
      break;
  }
  r.finish();
  return out;
}

void check_arity(const Step& s) {
  const std::size_t n = s.inputs.size();
  switch (s.op) {
    case StepOp::lookup:
      if (n != 0) step_error(s.id, "lookup takes no inputs, got " + std::to_string(n));
      break;
    case StepOp::traverse:
    case StepOp::filter:
    case StepOp::anti_join:
    case StepOp::limit:
      if (n != 1) {
        step_error(s.id, std::string(to_string(s.op)) + " takes exactly 1 input, got " +
                             std::to_string(n));
      }
      break;
    case StepOp::intersect:
    case StepOp::union_:
    case StepOp::difference:
      if (n < 2) {
        step_error(s.id, std::string(to_string(s.op)) + " takes at least 2 inputs, got " +
                             std::to_string(n));
      }
      break;
  }
}

std::vector<NodeId> sorted_unique(std::vector<NodeId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool scalar_equals(const Json& v, const std::string& want) {
  if (v.is_string()) return v.get_ref<const std::string&>() == want;
  if (v.is_number_integer()) return std::to_string(v.get<long long>()) == want;
  if (v.is_number()) return v.dump() == want;
  return false;
}

bool filter_matches(const Node& n, const FilterParams& p) {
  auto it = n.properties.find(p.key);
  if (it == n.properties.end()) return false;
  if (p.comparator == Comparator::exists) return true;
  const Json& v = it->second;
  std::vector<Json> elems = v.is_array() ? std::vector<Json>(v.begin(), v.end())
                                         : std::vector<Json>{v};
  for (const auto& e : elems) {
    if (p.comparator == Comparator::eq && scalar_equals(e, p.value)) return true;
    if (p.comparator == Comparator::contains && e.is_string() &&
        e.get_ref<const std::string&>().find(p.value) != std::string::npos) {
      return true;
    }
  }
  return false;
}

std::vector<NodeId> run_traverse(const std::vector<NodeId>& seeds, const TraverseParams& p,
                                 const GraphStore& graph) {
  std::set<NodeId> seen(seeds.begin(), seeds.end());
  std::vector<NodeId> frontier = seeds;
  std::vector<NodeId> reached;
  for (std::size_t hop = 0; hop < p.depth && !frontier.empty(); ++hop) {
    std::vector<NodeId> next;
    for (const auto& id : frontier) {
      for (const auto& nb : graph.neighbors(id, p.edge_kinds, p.direction)) {
        if (seen.insert(nb.node->id).second) {
          next.push_back(nb.node->id);
          reached.push_back(nb.node->id);
        }
      }
    }
    frontier = std::move(next);
  }
  std::vector<NodeId> out;
  for (auto& id : reached) {
    if (!p.target_collection || graph.node(id).collection == *p.target_collection) {
      out.push_back(std::move(id));
    }
  }
  return sorted_unique(std::move(out));
}

}  // namespace

std::string_view to_string(StepOp op) {
  for (const auto& info : kOps) {
    if (info.op == op) return info.name;
  }
  return "?";
}

const Step* Workflow::find(const std::string& id) const {
  for (const auto& s : steps) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

std::vector<std::string> Workflow::output_steps() const {
  std::vector<std::string> out;
  for (const auto& s : steps) {
    if (s.output) out.push_back(s.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

WorkflowCycleError::WorkflowCycleError(std::vector<std::string> cycle)
    : ValidationError([&] {
        std::string msg = "workflow contains a cycle: ";
        for (const auto& id : cycle) msg += id + " -> ";
        msg += cycle.empty() ? std::string() : cycle.front();
        return msg;
      }()),
      cycle_(std::move(cycle)) {}

Workflow parse_workflow(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("workflow is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("workflow must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (k != "name" && k != "steps") throw ValidationError("unknown workflow key '" + k + "'");
  }
  Workflow wf;
  if (j.contains("name")) {
    if (!j.at("name").is_string()) throw ValidationError("workflow 'name' must be a string");
    wf.name = j.at("name").get<std::string>();
  }
  if (!j.contains("steps") || !j.at("steps").is_array() || j.at("steps").empty()) {
    throw ValidationError("workflow needs a non-empty 'steps' list");
  }

  std::set<std::string> ids;
  std::size_t position = 0;
  for (const auto& js : j.at("steps")) {
    ++position;
    if (!js.is_object() || !js.contains("id") || !js.at("id").is_string() ||
        js.at("id").get<std::string>().empty()) {
      throw ValidationError("step #" + std::to_string(position) + ": missing string 'id'");
    }
    Step s;
    s.id = js.at("id").get<std::string>();
    for (const auto& [k, v] : js.items()) {
      if (k != "id" && k != "op" && k != "inputs" && k != "params" && k != "output") {
        step_error(s.id, "unknown key '" + k + "'");
      }
    }
    if (!ids.insert(s.id).second) step_error(s.id, "duplicate step id");
    if (!js.contains("op") || !js.at("op").is_string()) step_error(s.id, "missing 'op'");
    const auto op = js.at("op").get<std::string>();
    const auto* info = std::find_if(std::begin(kOps), std::end(kOps),
                                    [&](const OpInfo& o) { return op == o.name; });
    if (info == std::end(kOps)) step_error(s.id, "unknown op '" + op + "'");
    s.op = info->op;
    if (js.contains("inputs")) {
      if (!js.at("inputs").is_array()) step_error(s.id, "'inputs' must be a list");
      for (const auto& in : js.at("inputs")) {
        if (!in.is_string()) step_error(s.id, "'inputs' must be a list of step ids");
        s.inputs.push_back(in.get<std::string>());
      }
    }
    if (js.contains("output")) {
      if (!js.at("output").is_boolean()) step_error(s.id, "'output' must be a boolean");
      s.output = js.at("output").get<bool>();
    }
    check_arity(s);
    s.params = parse_params(s, js.contains("params") ? js.at("params") : Json::object());
    wf.steps.push_back(std::move(s));
  }
  if (wf.output_steps().empty()) throw ValidationError("workflow marks no step as output");
  return wf;
}

std::vector<std::string> validate_dag(const Workflow& wf) {
  std::map<std::string, std::size_t> indegree;
  std::map<std::string, std::vector<std::string>> dependents;
  for (const auto& s : wf.steps) indegree[s.id];
  for (const auto& s : wf.steps) {
    for (const auto& in : s.inputs) {
      if (!indegree.count(in)) {
        throw ValidationError("step '" + s.id + "': input '" + in + "' does not exist");
      }
      ++indegree[s.id];
      dependents[in].push_back(s.id);
    }
  }

  std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
  for (const auto& [id, deg] : indegree) {
    if (deg == 0) ready.push(id);
  }
  std::vector<std::string> order;
  auto remaining = indegree;
  while (!ready.empty()) {
    auto id = ready.top();
    ready.pop();
    order.push_back(id);
    for (const auto& d : dependents[id]) {
      if (--remaining[d] == 0) ready.push(d);
    }
  }
  if (order.size() == wf.steps.size()) return order;

  // Walk input edges among the unfinished steps until a step repeats.
  std::set<std::string> done(order.begin(), order.end());
  std::string cur;
  for (const auto& [id, deg] : remaining) {
    if (!done.count(id)) {
      cur = id;
      break;
    }
  }
  std::vector<std::string> path;
  std::map<std::string, std::size_t> pos;
  while (!pos.count(cur)) {
    pos[cur] = path.size();
    path.push_back(cur);
    const Step* s = wf.find(cur);
    for (const auto& in : s->inputs) {
      if (!done.count(in)) {
        cur = in;
        break;
      }
    }
  }
  std::vector<std::string> cycle(path.begin() + static_cast<std::ptrdiff_t>(pos[cur]), path.end());
  std::reverse(cycle.begin(), cycle.end());  // report in data-flow order
  throw WorkflowCycleError(std::move(cycle));
}

std::vector<NodeId> evaluate_step(const Step& step,
                                  const std::vector<const std::vector<NodeId>*>& inputs,
                                  const GraphStore& graph) {
  switch (step.op) {
    case StepOp::lookup: {
      const auto& p = std::get<LookupParams>(step.params);
      std::vector<NodeId> out;
      for (const Node* n : graph.find_nodes(p.collection, p.label)) out.push_back(n->id);
      return sorted_unique(std::move(out));
    }
    case StepOp::traverse:
      return run_traverse(*inputs.at(0), std::get<TraverseParams>(step.params), graph);
    case StepOp::filter: {
      const auto& p = std::get<FilterParams>(step.params);
      std::vector<NodeId> out;
      for (const auto& id : *inputs.at(0)) {
        if (filter_matches(graph.node(id), p)) out.push_back(id);
      }
      return out;
    }
    case StepOp::anti_join: {
      const auto& p = std::get<AntiJoinParams>(step.params);
      std::vector<NodeId> out;
      for (const auto& id : *inputs.at(0)) {
        const auto nbs = graph.neighbors(id, p.edge_kinds, Direction::both);
        const bool linked = std::any_of(nbs.begin(), nbs.end(), [&](const Neighbor& nb) {
          return nb.node->collection == p.excluded_collection;
        });
        if (!linked) out.push_back(id);
      }
      return out;
    }
    case StepOp::limit: {
      const auto n = std::get<LimitParams>(step.params).n;
      const auto& in = *inputs.at(0);
      return std::vector<NodeId>(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(
                                                             std::min(n, in.size())));
    }
    case StepOp::intersect: {
      std::vector<NodeId> acc = *inputs.front();
      for (std::size_t i = 1; i < inputs.size(); ++i) {
        std::vector<NodeId> next;
        std::set_intersection(acc.begin(), acc.end(), inputs[i]->begin(), inputs[i]->end(),
                              std::back_inserter(next));
        acc = std::move(next);
      }
      return acc;
    }
    case StepOp::union_: {
      std::vector<NodeId> acc;
      for (const auto* in : inputs) acc.insert(acc.end(), in->begin(), in->end());
      return sorted_unique(std::move(acc));
    }
    case StepOp::difference: {
      std::vector<NodeId> acc = *inputs.front();
      for (std::size_t i = 1; i < inputs.size(); ++i) {
        std::vector<NodeId> next;
        std::set_difference(acc.begin(), acc.end(), inputs[i]->begin(), inputs[i]->end(),
                            std::back_inserter(next));
        acc = std::move(next);
      }
      return acc;
    }
  }
  return {};
}

ExecutionResult execute(const Workflow& wf, const GraphStore& graph, ExecutionMode mode) {
  if (!graph.frozen()) throw StateError("workflows run on a frozen graph; call freeze() first");
  const auto order = validate_dag(wf);

  ExecutionResult res;
  res.trace.outputs = wf.output_steps();

  auto run_one = [&](const Step& step) {
    std::vector<const std::vector<NodeId>*> inputs;
    for (const auto& in : step.inputs) inputs.push_back(&res.results.at(in).node_ids);
    const auto t0 = std::chrono::steady_clock::now();
    auto ids = evaluate_step(step, inputs, graph);
    const auto wall = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::steady_clock::now() - t0);
    return std::make_pair(StepResult{step.id, std::move(ids)}, wall);
  };
  auto record = [&](StepResult r, std::chrono::microseconds wall) {
    res.trace.steps.push_back({r.step_id, r.cardinality(), wall});
    const auto id = r.step_id;
    res.results.emplace(id, std::move(r));
  };

  if (mode == ExecutionMode::sequential) {
    for (const auto& id : order) {
      auto [r, wall] = run_one(*wf.find(id));
      record(std::move(r), wall);
    }
    return res;
  }

  // Waves: a step runs once every input finished in an earlier wave. The
  // results map is only written between waves.
  std::map<std::string, std::size_t> level;
  for (const auto& id : order) {
    std::size_t l = 0;
    for (const auto& in : wf.find(id)->inputs) l = std::max(l, level.at(in) + 1);
    level[id] = l;
  }
  std::map<std::size_t, std::vector<std::string>> waves;
  for (const auto& id : order) waves[level[id]].push_back(id);
  for (const auto& [l, ids] : waves) {
    std::vector<std::future<std::pair<StepResult, std::chrono::microseconds>>> futures;
    for (const auto& id : ids) {
      const Step* step = wf.find(id);
      futures.push_back(std::async(std::launch::async, [&run_one, step] { return run_one(*step); }));
    }
    std::vector<std::pair<StepResult, std::chrono::microseconds>> done;
    for (auto& f : futures) done.push_back(f.get());
    for (auto& [r, wall] : done) record(std::move(r), wall);
  }
  return res;
}

}  // namespace biokg
