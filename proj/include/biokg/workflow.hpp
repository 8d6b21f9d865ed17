#pragma once

// Query workflows: a DAG of set-valued steps evaluated over a frozen graph.
//
// File format (JSON):
//   {
//     "name": "trehalose-enzymes",
//     "steps": [
//       {"id": "seed", "op": "lookup", "params": {"collection": "compound", "label": "Trehalose"}},
//       {"id": "enzymes", "op": "traverse", "inputs": ["seed"],
//        "params": {"edge_kinds": ["catalytic_activity"], "direction": "in", "depth": 1,
//                   "target_collection": "uniprot"}},
//       {"id": "novel", "op": "anti_join", "inputs": ["enzymes"],
//        "params": {"excluded_collection": "cazy"}, "output": true}
//     ]
//   }
//
// Ops and parameters:
//   lookup      0 inputs   collection?, label?  (at least one)
//   traverse    1 input    edge_kinds?, direction = out|in|both (both), depth >= 1 (1),
//                          target_collection?
//   filter      1 input    key, comparator = eq|contains|exists, value (not for exists)
//   anti_join   1 input    excluded_collection, edge_kinds?
//   limit       1 input    n
//   intersect, union, difference   >= 2 inputs (difference: first minus the rest)

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "biokg/error.hpp"
#include "biokg/graph_store.hpp"

namespace biokg {

enum class StepOp { lookup, traverse, filter, intersect, union_, difference, anti_join, limit };

std::string_view to_string(StepOp op);

struct LookupParams {
  std::optional<std::string> collection;
  std::optional<std::string> label;
};

struct TraverseParams {
  KindFilter edge_kinds;
  Direction direction = Direction::both;
  std::size_t depth = 1;
  std::optional<std::string> target_collection;
};

enum class Comparator { eq, contains, exists };

struct FilterParams {
  std::string key;
  Comparator comparator = Comparator::exists;
  std::string value;
};

struct AntiJoinParams {
  std::string excluded_collection;
  KindFilter edge_kinds;
};

struct LimitParams {
  std::size_t n = 0;
};

using StepParams =
    std::variant<std::monostate, LookupParams, TraverseParams, FilterParams, AntiJoinParams,
                 LimitParams>;

struct Step {
  std::string id;
  StepOp op = StepOp::lookup;
  std::vector<std::string> inputs;
  StepParams params;
  bool output = false;
};

struct Workflow {
  std::string name;
  std::vector<Step> steps;  // file order

  const Step* find(const std::string& id) const;
  std::vector<std::string> output_steps() const;
};

class WorkflowCycleError : public ValidationError {
 public:
  WorkflowCycleError(std::vector<std::string> cycle);
  const std::vector<std::string>& cycle() const { return cycle_; }

 private:
  std::vector<std::string> cycle_;
};

// Structural checks: known op, arity, required params, unique ids, an output
// step. Errors name the step.
Workflow parse_workflow(const std::string& text);

// Kahn's algorithm, ties broken by ascending step id. Throws
// WorkflowCycleError (listing one cycle) or ValidationError for a dangling
// input reference.
std::vector<std::string> validate_dag(const Workflow& wf);

struct StepResult {
  std::string step_id;
  std::vector<NodeId> node_ids;  // canonical order, unique

  std::size_t cardinality() const { return node_ids.size(); }
  bool operator==(const StepResult&) const = default;
};

struct TraceEntry {
  std::string step_id;
  std::size_t cardinality = 0;
  std::chrono::microseconds wall{0};
};

struct ExecutionTrace {
  std::vector<TraceEntry> steps;  // execution order
  std::vector<std::string> outputs;
};

struct ExecutionResult {
  std::map<std::string, StepResult> results;
  ExecutionTrace trace;
};

enum class ExecutionMode { sequential, parallel };

// Requires a frozen graph. In parallel mode, steps whose inputs are all done
// run concurrently; results are identical to sequential mode.
ExecutionResult execute(const Workflow& wf, const GraphStore& graph,
                        ExecutionMode mode = ExecutionMode::sequential);

// Evaluates one step given its already computed inputs.
std::vector<NodeId> evaluate_step(const Step& step,
                                  const std::vector<const std::vector<NodeId>*>& inputs,
                                  const GraphStore& graph);

}  // namespace biokg
