#include "biokg/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "biokg/analytics.hpp"
#include "biokg/document.hpp"
#include "biokg/error.hpp"
#include "biokg/graph_dir.hpp"
#include "biokg/ingest.hpp"
#include "biokg/linker.hpp"
#include "biokg/ner.hpp"
#include "biokg/snapshot.hpp"
#include "biokg/workflow.hpp"

namespace fs = std::filesystem;

namespace biokg::cli {

namespace {

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + p.string());
  out << text;
  if (!out) throw IoError("write failed: " + p.string());
}

void print_stats(std::ostream& out, const GraphStats& s) {
  out << "nodes: " << s.node_count << "\n";
  for (const auto& [c, n] : s.per_collection) out << "  " << c << ": " << n << "\n";
  out << "edges: " << s.edge_count << "\n";
  for (const auto& [k, n] : s.per_kind) out << "  " << k << ": " << n << "\n";
}

void print_link_report(std::ostream& out, const std::string& title, const LinkReport& r) {
  out << title << ": nodes_created=" << r.nodes_created << " edges_created=" << r.edges_created
      << " misses=" << r.misses << " ambiguities=" << r.ambiguities << " mentions=" << r.mentions
      << " facts=" << r.facts << " rows_skipped=" << r.rows_skipped << "\n";
}

struct Options {
  std::string graph;
  std::string descriptor;
  std::string input;
  std::string workflow;
  std::string output;
  std::string report;
  std::string out_dir;
  std::string metric;
  std::string collection;
  std::uint64_t seed = 42;
  std::size_t max_iters = 50;
  bool parallel = false;
  bool json = false;
};

int cmd_ingest(const Options& o, std::ostream& out) {
  const auto descriptor = load_descriptor(read_text(o.descriptor));
  GraphDirLock lock(o.graph);
  auto graph = open_graph(o.graph);
  std::ifstream in(o.input, std::ios::binary);
  if (!in) throw IoError("cannot open " + o.input);
  auto result = ingest_stream(in, descriptor, graph);
  save_graph(graph, o.graph);
  append_entities(o.graph, result.documents);
  const auto& r = result.report;
  out << "ingest " << descriptor.source_name << ": inserted=" << r.inserted
      << " merged=" << r.merged << " rejected=" << r.rejected << " warnings=" << r.warnings
      << " relations_added=" << r.relations_added
      << " relations_deferred=" << r.relations_deferred << "\n";
  if (!o.report.empty()) write_text(o.report, to_json(r).dump(2) + "\n");
  return kExitOk;
}

int cmd_docs(const Options& o, std::ostream& out) {
  if (!fs::is_directory(o.input)) throw IoError("not a directory: " + o.input);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(o.input)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  // Parse everything before touching the graph so a bad file changes nothing.
  std::vector<ParsedDocument> docs;
  for (const auto& f : files) {
    try {
      docs.push_back(parse_document(read_text(f)));
    } catch (const ParseError& e) {
      throw ParseError(f.filename().string() + ": " + e.what());
    }
  }
  GraphDirLock lock(o.graph);
  auto graph = open_graph(o.graph);
  std::size_t segments = 0;
  std::size_t inserted = 0;
  std::size_t skipped = 0;
  for (const auto& d : docs) {
    segments += d.segments.size();
    skipped += d.skipped_elements;
    inserted += ingest_document(d, graph);
  }
  save_graph(graph, o.graph);
  out << "docs: documents=" << docs.size() << " segments=" << segments
      << " inserted=" << inserted << " skipped_elements=" << skipped << "\n";
  return kExitOk;
}

int cmd_link(const Options& o, std::ostream& out) {
  GraphDirLock lock(o.graph);
  auto graph = open_graph(o.graph);
  const auto entities = load_entities(o.graph);

  const auto relations = resolve_relations(entities, graph);
  const auto concepts = materialize_concepts(entities, graph);
  const auto gazetteer = build_gazetteer(graph);
  auto ner = run_document_linking(graph, gazetteer);
  save_graph(graph, o.graph);

  std::string mentions;
  for (const auto& m : ner.mentions) mentions += to_json(m).dump() + "\n";
  std::string facts;
  for (const auto& f : ner.facts) facts += to_json(f).dump() + "\n";
  write_text(fs::path(o.graph) / "audit" / "mentions.jsonl", mentions);
  write_text(fs::path(o.graph) / "audit" / "facts.jsonl", facts);

  print_link_report(out, "relations", relations);
  print_link_report(out, "concepts", concepts);
  out << "gazetteer: entries=" << gazetteer.size() << "\n";
  print_link_report(out, "documents", ner.report);

  Json report{{"relations", to_json(relations)},
              {"concepts", to_json(concepts)},
              {"gazetteer_entries", gazetteer.size()},
              {"documents", to_json(ner.report)}};
  const fs::path report_path =
      o.report.empty() ? fs::path(o.graph) / "link_report.json" : fs::path(o.report);
  write_text(report_path, report.dump(2) + "\n");
  return kExitOk;
}

int cmd_query(const Options& o, std::ostream& out) {
  const auto wf = parse_workflow(read_text(o.workflow));
  validate_dag(wf);
  auto graph = open_graph(o.graph);
  graph.freeze();
  const auto res =
      execute(wf, graph, o.parallel ? ExecutionMode::parallel : ExecutionMode::sequential);

  std::string records;
  for (const auto& step_id : res.trace.outputs) {
    const auto& r = res.results.at(step_id);
    out << "# " << step_id << " (" << r.cardinality() << " nodes)\n";
    for (const auto& id : r.node_ids) {
      const Node& n = graph.node(id);
      out << id.str() << "\t" << n.collection << "\t" << n.label << "\n";
      records += Json{{"step", step_id},
                      {"id", id.str()},
                      {"collection", n.collection},
                      {"label", n.label}}
                     .dump() +
                 "\n";
    }
  }
  out << "# trace" << (wf.name.empty() ? "" : " " + wf.name) << "\n";
  for (const auto& t : res.trace.steps) {
    out << "#   " << t.step_id << ": " << t.cardinality << " nodes, " << t.wall.count()
        << " us\n";
  }
  if (!o.output.empty()) write_text(o.output, records);
  return kExitOk;
}

int cmd_stats(const Options& o, std::ostream& out) {
  const auto graph = open_graph(o.graph);
  const auto s = graph.stats();
  if (o.json) {
    out << to_json(s).dump(2) << "\n";
  } else {
    print_stats(out, s);
  }
  return kExitOk;
}

int cmd_analytics(const Options& o, std::ostream& out) {
  auto graph = open_graph(o.graph);
  graph.freeze();
  std::vector<std::pair<std::string, std::size_t>> rows;
  std::string summary;
  if (o.metric == "degree") {
    const auto coll = o.collection.empty() ? std::nullopt : std::optional<std::string>(o.collection);
    for (const auto& [id, d] : degree_centrality(graph, coll)) rows.emplace_back(id.str(), d);
    summary = "degree: " + std::to_string(rows.size()) + " nodes";
  } else if (o.metric == "components") {
    const auto comps = connected_components(graph);
    for (std::size_t c = 0; c < comps.size(); ++c) {
      for (const auto& id : comps[c]) rows.emplace_back(id.str(), c);
    }
    std::sort(rows.begin(), rows.end());
    summary = "components: " + std::to_string(comps.size());
  } else if (o.metric == "clusters") {
    const auto res = label_propagation_clusters(graph, o.max_iters, o.seed);
    std::set<std::size_t> distinct;
    for (const auto& [id, c] : res.cluster) {
      rows.emplace_back(id.str(), c);
      distinct.insert(c);
    }
    summary = "clusters: " + std::to_string(distinct.size()) + " after " +
              std::to_string(res.iterations) + " iteration(s)" +
              (res.converged ? "" : " (not converged)");
  } else {
    throw ValidationError("unknown metric '" + o.metric + "' (degree, components, clusters)");
  }

  std::string lines;
  for (const auto& [id, v] : rows) lines += Json{{"node", id}, {"value", v}}.dump() + "\n";
  if (o.output.empty()) {
    out << lines;
  } else {
    write_text(o.output, lines);
  }
  out << summary << "\n";
  return kExitOk;
}

int cmd_export(const Options& o, std::ostream& out) {
  const auto graph = open_graph(o.graph);
  save_snapshot(graph, o.out_dir);
  // Reload to confirm the export is readable before reporting success.
  const auto check = load_snapshot(o.out_dir);
  if (!(check.stats() == graph.stats())) throw IoError("export verification failed");
  out << "exported " << graph.stats().node_count << " nodes, " << graph.stats().edge_count
      << " edges to " << o.out_dir << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Knowledge-graph construction and workflow queries", "biokg"};
  app.require_subcommand(1, 1);
  Options o;
  if (const char* env = std::getenv(kGraphEnv)) o.graph = env;

  auto graph_opt = [&](CLI::App* sub) {
    auto* opt = sub->add_option("--graph", o.graph, "Graph directory");
    if (o.graph.empty()) opt->required();
  };

  auto* ingest = app.add_subcommand("ingest", "Ingest records of one structured source");
  ingest->add_option("--descriptor", o.descriptor, "Source descriptor file")->required();
  ingest->add_option("--input", o.input, "Line-delimited JSON records")->required();
  ingest->add_option("--report", o.report, "Write the ingest report as JSON");
  graph_opt(ingest);

  auto* docs = app.add_subcommand("docs", "Ingest a directory of parsed-document JSON files");
  docs->add_option("--input", o.input, "Directory of *.json documents")->required();
  graph_opt(docs);

  auto* link = app.add_subcommand("link", "Resolve relations, concepts, NER, co-occurrence, facts");
  link->add_option("--report", o.report, "Link report path (default <graph>/link_report.json)");
  graph_opt(link);

  auto* query = app.add_subcommand("query", "Execute a workflow");
  query->add_option("--workflow", o.workflow, "Workflow file")->required();
  query->add_option("--output", o.output, "Write output node records as JSON lines");
  query->add_flag("--parallel", o.parallel, "Run independent steps concurrently");
  graph_opt(query);

  auto* stats = app.add_subcommand("stats", "Print graph statistics");
  stats->add_flag("--json", o.json, "Machine-readable output");
  graph_opt(stats);

  auto* analytics = app.add_subcommand("analytics", "Run degree, components or clusters");
  analytics->add_option("metric", o.metric, "degree | components | clusters")->required();
  analytics->add_option("--collection", o.collection, "Restrict degree to one collection");
  analytics->add_option("--seed", o.seed, "Clustering seed");
  analytics->add_option("--max-iters", o.max_iters, "Clustering iteration cap")
      ->check(CLI::PositiveNumber);
  analytics->add_option("--output", o.output, "Write (node, value) JSON lines here");
  graph_opt(analytics);

  auto* exp = app.add_subcommand("export", "Write a standalone snapshot copy");
  exp->add_option("--out", o.out_dir, "Destination directory")->required();
  graph_opt(exp);

  std::vector<std::string> argv_store{"biokg"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitValidation;
  }

  try {
    if (*ingest) return cmd_ingest(o, out);
    if (*docs) return cmd_docs(o, out);
    if (*link) return cmd_link(o, out);
    if (*query) return cmd_query(o, out);
    if (*stats) return cmd_stats(o, out);
    if (*analytics) return cmd_analytics(o, out);
    if (*exp) return cmd_export(o, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  err << app.help();
  return kExitValidation;
}

}  // namespace biokg::cli
