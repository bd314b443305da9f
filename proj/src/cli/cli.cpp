#include "rvsc/cli.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rvsc/analytics.hpp"
#include "rvsc/diagram.hpp"
#include "rvsc/eval.hpp"
#include "rvsc/graph.hpp"
#include "rvsc/process_model.hpp"
#include "rvsc/query.hpp"
#include "rvsc/rules.hpp"
#include "rvsc/text.hpp"

namespace rvsc::cli {

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ParseError with the file it came from.
struct SourcedParseError {
  std::string file;
  ParseError error;
};

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void WriteFile(const std::string &path, const std::string &text, bool append = false) {
  std::ofstream out(path, append ? std::ios::binary | std::ios::app : std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
}

template <typename F>
auto Sourced(const std::string &file, F &&f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError &e) {
    throw SourcedParseError{file, e};
  }
}

diagram::DiagramAst LoadDiagram(const std::string &path) {
  std::string text = ReadFile(path);
  return Sourced(path, [&] { return diagram::parse_activity_diagram(text, path); });
}

// Canonical JSON when the file starts with '{', PlantUML otherwise.
model::ProcessModel LoadModel(const std::string &path) {
  std::string text = ReadFile(path);
  if (trim(text).substr(0, 1) == "{") return model::from_canonical_json(text);
  return model::lower_to_model(Sourced(path, [&] { return diagram::parse_activity_diagram(text, path); }));
}

std::vector<rules::Rule> LoadRules(const std::string &path) {
  std::string text = ReadFile(path);
  return Sourced(path, [&] { return rules::parse_rules(text); });
}

kg::PropertyGraph LoadGraph(const std::string &path) {
  std::string text = ReadFile(path);
  return Sourced(path, [&] { return kg::ingest_script(text); });
}

// One query per non-blank line; '#' lines are comments.
struct QueryLine {
  int line = 1;
  std::string text;
};

std::vector<QueryLine> QueryLines(const std::string &text) {
  std::vector<QueryLine> out;
  int n = 0;
  for (const auto &line : split_lines(text)) {
    ++n;
    auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    out.push_back({n, std::string(t)});
  }
  return out;
}

// Parses one line of a query file; errors carry the file line.
kg::QueryAst ParseQueryLine(const std::string &file, const QueryLine &q) {
  try {
    return kg::parse_query(q.text);
  } catch (const ParseError &e) {
    throw SourcedParseError{file, ParseError(q.line + e.line() - 1, e.column(), e.message(), e.snippet())};
  }
}

std::string Base64(const std::string &bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3) + 1, '\0');
  int n = EVP_EncodeBlock(reinterpret_cast<unsigned char *>(out.data()),
                          reinterpret_cast<const unsigned char *>(bytes.data()), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

gateway::ImageInput LoadImage(const std::string &path) {
  std::string ext = path.substr(path.find_last_of('.') == std::string::npos ? path.size() : path.find_last_of('.'));
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  std::string type = "application/octet-stream";
  if (ext == ".png") type = "image/png";
  else if (ext == ".jpg" || ext == ".jpeg") type = "image/jpeg";
  else if (ext == ".gif") type = "image/gif";
  else if (ext == ".webp") type = "image/webp";
  return {type, Base64(ReadFile(path))};
}

struct Context {
  std::istream &in;
  std::ostream &out;
  std::ostream &err;
  const Environment &env;
};

struct EndpointOptions {
  std::string config;
  std::string replay;
  std::string transcript;
};

void AddEndpointOptions(CLI::App *cmd, EndpointOptions &o) {
  cmd->add_option("--config", o.config, "endpoint configuration (JSON)");
  cmd->add_option("--replay", o.replay, "answer from a JSON array of canned responses instead of an endpoint");
  cmd->add_option("--transcript", o.transcript, "append the exchange to this JSON-lines file");
}

struct Endpoint {
  std::unique_ptr<gateway::Transport> transport;
  gateway::GatewayOptions options;
};

Endpoint Connect(const EndpointOptions &o, const Context &ctx) {
  gateway::EndpointConfig config = gateway::load_config(
      o.config.empty() ? std::nullopt : std::optional<std::string>(o.config), ctx.env.getenv);
  if (!o.replay.empty()) {
    std::vector<std::string> responses;
    try {
      responses = nlohmann::json::parse(ReadFile(o.replay)).get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception &e) {
      throw UsageError("replay file '" + o.replay + "' must be a JSON array of strings");
    }
    if (config.max_retries < 0) throw UsageError("max_retries must be >= 0");
    return {std::make_unique<gateway::ScriptedTransport>(std::move(responses)), gateway::options_from(config)};
  }
  try {
    gateway::validate_config(config);
  } catch (const std::invalid_argument &e) {
    throw gateway::ExtractionError(std::string("no usable endpoint: ") + e.what(), gateway::Transcript(),
                                   std::nullopt, true);
  }
  return {ctx.env.make_transport(config), gateway::options_from(config)};
}

void SaveTranscript(const EndpointOptions &o, const gateway::Transcript &t) {
  if (!o.transcript.empty()) WriteFile(o.transcript, t.to_jsonl(), true);
}

template <typename F>
auto WithTranscript(const EndpointOptions &o, F &&f) -> decltype(f()) {
  try {
    auto result = f();
    SaveTranscript(o, result.transcript);
    return result;
  } catch (const gateway::ExtractionError &e) {
    SaveTranscript(o, e.transcript());
    throw;
  }
}

void Emit(const Context &ctx, const std::string &path, const std::string &text) {
  if (path.empty()) ctx.out << text;
  else WriteFile(path, text);
}

std::string RenderPath(const std::vector<std::string> &ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? " -> " : "") + ids[i];
  return s;
}

bool Json(const std::string &format) { return format == "json"; }

void CheckFormat(CLI::Option *opt) { opt->check(CLI::IsMember({"text", "json"})); }

int RunQueryLine(const Context &ctx, const kg::PropertyGraph &graph, const std::string &text,
                 const std::string &format) {
  auto q = kg::parse_query(text);
  auto table = kg::execute(q, graph);
  ctx.out << (Json(format) ? kg::table_to_json(table) : kg::render_table(table));
  return kOk;
}

int Dispatch(const std::vector<std::string> &args, const Context &ctx) {
  CLI::App app{"Process and supply-chain graph validation toolkit", "rvsc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "rvsc 0.1.0");

  // parse
  std::string parse_file;
  bool parse_print = false;
  auto *parse = app.add_subcommand("parse", "check an activity diagram");
  parse->add_option("file", parse_file, "PlantUML activity diagram")->required();
  parse->add_flag("--print", parse_print, "print the normalized diagram");

  // model
  std::string model_file, model_out;
  auto *model_cmd = app.add_subcommand("model", "lower a diagram to canonical model JSON");
  model_cmd->add_option("file", model_file, "PlantUML activity diagram")->required();
  model_cmd->add_option("-o,--output", model_out, "write to a file instead of stdout");

  // validate
  std::string val_model, val_rules, val_format = "text";
  bool val_serial = false;
  auto *validate = app.add_subcommand("validate", "check rules against a process model");
  validate->add_option("--model", val_model, "diagram (.puml) or canonical model JSON")->required();
  validate->add_option("--rules", val_rules, "rule file")->required();
  validate->add_flag("--serial", val_serial, "single-threaded evaluation");
  CheckFormat(validate->add_option("--format", val_format, "text or json"));

  // kg
  auto *kg_cmd = app.add_subcommand("kg", "knowledge graph commands");
  kg_cmd->require_subcommand(1);
  std::string kg_graph, kg_query, kg_query_file, kg_format = "text", kg_out;
  bool kg_check = false;
  std::size_t kg_top = 5;
  auto *ingest = kg_cmd->add_subcommand("ingest", "load a graph script and summarize it");
  ingest->add_option("graph", kg_graph, "graph script")->required();
  CheckFormat(ingest->add_option("--format", kg_format, "text or json"));
  auto *query = kg_cmd->add_subcommand("query", "run a query");
  query->add_option("--graph", kg_graph, "graph script")->required();
  auto *q_text = query->add_option("-q,--query", kg_query, "query text");
  auto *q_file = query->add_option("--file", kg_query_file, "file with one query per line");
  q_text->excludes(q_file);
  query->add_flag("--check", kg_check, "compare with the brute-force matcher; exit 1 on mismatch");
  CheckFormat(query->add_option("--format", kg_format, "text or json"));
  auto *analyze = kg_cmd->add_subcommand("analyze", "bottlenecks and key participants");
  analyze->add_option("--graph", kg_graph, "graph script")->required();
  analyze->add_option("--top", kg_top, "number of nodes ranked by degree")->check(CLI::PositiveNumber);
  CheckFormat(analyze->add_option("--format", kg_format, "text or json"));
  auto *kexport = kg_cmd->add_subcommand("export", "write the graph as a canonical script");
  kexport->add_option("--graph", kg_graph, "graph script")->required();
  kexport->add_option("-o,--output", kg_out, "write to a file instead of stdout");

  // trace
  std::string tr_graph, tr_from, tr_to, tr_format = "text";
  int tr_len = 4;
  auto *trace = app.add_subcommand("trace", "list supply paths between two nodes");
  trace->add_option("--graph", tr_graph, "graph script")->required();
  trace->add_option("--from", tr_from, "source node id")->required();
  trace->add_option("--to", tr_to, "target node id")->required();
  trace->add_option("--max-len", tr_len, "maximum number of relationships (1-8)");
  CheckFormat(trace->add_option("--format", tr_format, "text or json"));

  // extract
  auto *extract = app.add_subcommand("extract", "model-backed extraction");
  extract->require_subcommand(1);
  EndpointOptions ep;
  std::string ex_text, ex_prior, ex_out, ex_diagram, ex_graph, ex_question;
  std::vector<std::string> ex_images;
  bool ex_run = false;
  std::string ex_format = "text";
  auto *ex_process = extract->add_subcommand("process", "diagram from a description or images");
  auto *ex_graph_cmd = extract->add_subcommand("graph", "graph script from a description or images");
  for (auto *c : {ex_process, ex_graph_cmd}) {
    c->add_option("--text", ex_text, "description file");
    c->add_option("--image", ex_images, "diagram image (repeatable)");
    c->add_option("--prior", ex_prior, "existing model to update");
    c->add_option("-o,--output", ex_out, "write to a file instead of stdout");
    AddEndpointOptions(c, ep);
  }
  auto *ex_rules = extract->add_subcommand("rules", "formal rules from free text");
  ex_rules->add_option("--text", ex_text, "rule text file")->required();
  ex_rules->add_option("--diagram", ex_diagram, "PlantUML activity diagram")->required();
  ex_rules->add_option("-o,--output", ex_out, "write to a file instead of stdout");
  AddEndpointOptions(ex_rules, ep);
  auto *ex_query = extract->add_subcommand("query", "query from a natural-language question");
  ex_query->add_option("--graph", ex_graph, "graph script")->required();
  ex_query->add_option("--question", ex_question, "question text")->required();
  ex_query->add_flag("--run", ex_run, "execute the query and print the result");
  CheckFormat(ex_query->add_option("--format", ex_format, "text or json"));
  AddEndpointOptions(ex_query, ep);

  // eval
  auto *eval_cmd = app.add_subcommand("eval", "score extractions against ground truth");
  eval_cmd->require_subcommand(1);
  std::string ev_truth, ev_extracted, ev_truth_rules, ev_extracted_rules, ev_graph, ev_candidates, ev_dir,
      ev_format = "text";
  auto *ev_graph_cmd = eval_cmd->add_subcommand("graph", "concepts, relationships, attributes");
  ev_graph_cmd->add_option("--truth", ev_truth, "ground-truth graph script")->required();
  ev_graph_cmd->add_option("--extracted", ev_extracted, "extracted graph script")->required();
  auto *ev_process = eval_cmd->add_subcommand("process", "participants, activities, relationships, artifacts, rules");
  ev_process->add_option("--truth", ev_truth, "ground-truth diagram or model JSON")->required();
  ev_process->add_option("--extracted", ev_extracted, "extracted diagram or model JSON")->required();
  ev_process->add_option("--truth-rules", ev_truth_rules, "ground-truth rules");
  ev_process->add_option("--extracted-rules", ev_extracted_rules, "extracted rules");
  auto *ev_queries = eval_cmd->add_subcommand("queries", "query correctness");
  ev_queries->add_option("--graph", ev_graph, "graph script")->required();
  ev_queries->add_option("--truth", ev_truth, "reference queries, one per line")->required();
  ev_queries->add_option("--candidates", ev_candidates, "generated queries, one per line")->required();
  auto *ev_all = eval_cmd->add_subcommand("all", "every aspect from a fixture directory");
  ev_all->add_option("--dir", ev_dir, "directory with the standard fixture file names")->required();
  for (auto *c : {ev_graph_cmd, ev_process, ev_queries, ev_all})
    CheckFormat(c->add_option("--format", ev_format, "text or json"));

  // repl
  std::string repl_graph, repl_format = "text";
  EndpointOptions repl_ep;
  auto *repl = app.add_subcommand("repl", "interactive queries; 'nl: ...' lines go through the model");
  repl->add_option("--graph", repl_graph, "graph script")->required();
  CheckFormat(repl->add_option("--format", repl_format, "text or json"));
  AddEndpointOptions(repl, repl_ep);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &e) {
    ctx.out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp &e) {
    ctx.out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion &e) {
    ctx.out << e.what() << "\n";
    return kOk;
  } catch (const CLI::ParseError &e) {
    ctx.err << "error[usage]: " << e.what() << "\n";
    return kUsage;
  }
  // Help for a nested subcommand is handled by CLI11 throwing CallForHelp above.

  if (parse->parsed()) {
    auto ast = LoadDiagram(parse_file);
    if (parse_print) ctx.out << diagram::serialize_ast(ast);
    else ctx.out << parse_file << ": ok (" << ast.elements.size() << " top-level elements)\n";
    return kOk;
  }
  if (model_cmd->parsed()) {
    auto m = model::lower_to_model(LoadDiagram(model_file));
    Emit(ctx, model_out, model::to_canonical_json(m));
    return kOk;
  }
  if (validate->parsed()) {
    auto m = LoadModel(val_model);
    auto rs = LoadRules(val_rules);
    auto verdicts = val_serial ? rules::evaluate_serial(rs, m) : rules::evaluate(rs, m);
    ctx.out << (Json(val_format) ? rules::verdicts_to_json(verdicts) : rules::explain(rs, verdicts, m));
    bool violated = std::any_of(verdicts.begin(), verdicts.end(),
                                [](const rules::Verdict &v) { return v.status == rules::Status::kViolated; });
    return violated ? kViolation : kOk;
  }
  if (kg_cmd->parsed()) {
    auto g = LoadGraph(kg_graph);
    if (ingest->parsed()) {
      std::size_t props = 0;
      std::set<std::string> labels, types;
      for (const auto &n : g.nodes()) {
        props += n.props.size();
        labels.insert(n.labels.begin(), n.labels.end());
      }
      for (const auto &r : g.relationships()) types.insert(r.type);
      if (Json(kg_format)) {
        nlohmann::ordered_json j;
        j["nodes"] = g.node_count();
        j["relationships"] = g.relationship_count();
        j["properties"] = props;
        j["labels"] = labels;
        j["relationship_types"] = types;
        ctx.out << j.dump(2) << "\n";
      } else {
        ctx.out << g.node_count() << " nodes, " << g.relationship_count() << " relationships, " << props
                << " properties\n";
        ctx.out << "labels: " << labels.size() << ", relationship types: " << types.size() << "\n";
      }
      return kOk;
    }
    if (query->parsed()) {
      std::vector<QueryLine> texts;
      if (!kg_query.empty()) texts.push_back({1, kg_query});
      else if (!kg_query_file.empty()) texts = QueryLines(ReadFile(kg_query_file));
      else throw UsageError("kg query needs --query or --file");
      bool mismatch = false;
      for (const auto &text : texts) {
        auto q = ParseQueryLine(kg_query_file.empty() ? "<query>" : kg_query_file, text);
        auto table = kg::execute(q, g);
        ctx.out << (Json(kg_format) ? kg::table_to_json(table) : kg::render_table(table));
        if (kg_check && kg::brute_force_match(q, g) != table) {
          mismatch = true;
          ctx.err << "error[mismatch]: result differs from the brute-force matcher: " << text.text << "\n";
        }
      }
      return mismatch ? kViolation : kOk;
    }
    if (analyze->parsed()) {
      auto cut = kg::articulation_points(g);
      auto top = kg::degree_centrality(g, kg_top);
      std::vector<std::string> cut_sorted(cut.begin(), cut.end());
      std::sort(cut_sorted.begin(), cut_sorted.end(), natural_less);
      if (Json(kg_format)) {
        nlohmann::ordered_json j;
        j["articulation_points"] = cut_sorted;
        j["degree"] = nlohmann::ordered_json::array();
        for (const auto &[id, d] : top) j["degree"].push_back({{"id", id}, {"degree", d}});
        ctx.out << j.dump(2) << "\n";
      } else {
        ctx.out << "bottlenecks (articulation points): " << cut_sorted.size() << "\n";
        for (const auto &id : cut_sorted) ctx.out << "  " << id << "\n";
        ctx.out << "top " << top.size() << " by degree:\n";
        for (const auto &[id, d] : top) ctx.out << "  " << id << " " << d << "\n";
      }
      return kOk;
    }
    Emit(ctx, kg_out, kg::export_script(g));
    return kOk;
  }
  if (trace->parsed()) {
    auto g = LoadGraph(tr_graph);
    auto paths = kg::trace_paths(g, tr_from, tr_to, tr_len);
    if (Json(tr_format)) {
      ctx.out << nlohmann::json(paths).dump() << "\n";
    } else {
      for (const auto &p : paths) ctx.out << RenderPath(p) << "\n";
      ctx.out << "(" << paths.size() << (paths.size() == 1 ? " path)\n" : " paths)\n");
    }
    return kOk;
  }
  if (extract->parsed()) {
    if (ex_process->parsed() || ex_graph_cmd->parsed()) {
      if (ex_text.empty() && ex_images.empty()) throw UsageError("extraction needs --text or --image");
      std::string description = ex_text.empty() ? "" : ReadFile(ex_text);
      std::vector<gateway::ImageInput> images;
      for (const auto &p : ex_images) images.push_back(LoadImage(p));
      if (ex_process->parsed()) {
        std::optional<diagram::DiagramAst> prior;
        if (!ex_prior.empty()) prior = LoadDiagram(ex_prior);
        auto endpoint = Connect(ep, ctx);
        gateway::Gateway gw(*endpoint.transport, endpoint.options);
        auto result = WithTranscript(ep, [&] { return gw.extract_process(description, prior ? &*prior : nullptr, images); });
        Emit(ctx, ex_out, diagram::serialize_ast(result.value.diagram));
      } else {
        std::optional<kg::PropertyGraph> prior;
        if (!ex_prior.empty()) prior = LoadGraph(ex_prior);
        auto endpoint = Connect(ep, ctx);
        gateway::Gateway gw(*endpoint.transport, endpoint.options);
        auto result = WithTranscript(ep, [&] { return gw.extract_graph(description, prior ? &*prior : nullptr, images); });
        Emit(ctx, ex_out, kg::export_script(result.value));
      }
      return kOk;
    }
    if (ex_rules->parsed()) {
      std::string text = ReadFile(ex_text);
      auto d = LoadDiagram(ex_diagram);
      auto endpoint = Connect(ep, ctx);
      gateway::Gateway gw(*endpoint.transport, endpoint.options);
      auto result = WithTranscript(ep, [&] { return gw.formalize_rules(text, d); });
      for (const auto &w : result.warnings) ctx.err << "warning: " << w << "\n";
      Emit(ctx, ex_out, rules::serialize_rules(result.value));
      return kOk;
    }
    auto g = LoadGraph(ex_graph);
    auto endpoint = Connect(ep, ctx);
    gateway::Gateway gw(*endpoint.transport, endpoint.options);
    auto result = WithTranscript(ep, [&] { return gw.nl_to_query(ex_question, g); });
    ctx.out << result.text;
    if (ex_run) {
      auto table = kg::execute(result.value, g);
      ctx.out << (Json(ex_format) ? kg::table_to_json(table) : kg::render_table(table));
    }
    return kOk;
  }
  if (eval_cmd->parsed()) {
    std::vector<eval::MatchReport> reports;
    auto graph_part = [&](const std::string &truth, const std::string &extracted) {
      auto r = eval::match_graph(LoadGraph(extracted), eval::graph_truth(LoadGraph(truth)));
      reports.insert(reports.end(), r.begin(), r.end());
    };
    auto process_part = [&](const std::string &truth, const std::string &extracted, const std::string &truth_rules,
                            const std::string &extracted_rules) {
      auto t = eval::process_truth(LoadModel(truth), truth_rules.empty() ? std::vector<rules::Rule>{}
                                                                         : LoadRules(truth_rules));
      auto r = eval::match_process(LoadModel(extracted), t,
                                   extracted_rules.empty() ? std::vector<rules::Rule>{} : LoadRules(extracted_rules));
      reports.insert(reports.end(), r.begin(), r.end());
    };
    auto query_part = [&](const std::string &graph, const std::string &truth, const std::string &candidates) {
      auto g = LoadGraph(graph);
      auto t = QueryLines(ReadFile(truth));
      auto c = QueryLines(ReadFile(candidates));
      if (t.size() != c.size())
        throw UsageError("'" + truth + "' has " + std::to_string(t.size()) + " queries but '" + candidates + "' has " +
                         std::to_string(c.size()));
      std::vector<std::pair<std::optional<kg::ResultTable>, kg::ResultTable>> pairs;
      for (std::size_t i = 0; i < t.size(); ++i) {
        auto oracle = kg::brute_force_match(ParseQueryLine(truth, t[i]), g);
        std::optional<kg::ResultTable> got;
        try {
          got = kg::execute(kg::parse_query(c[i].text), g);
        } catch (const std::exception &) {
        }
        pairs.emplace_back(std::move(got), std::move(oracle));
      }
      reports.push_back(eval::score_queries(pairs));
    };
    if (ev_graph_cmd->parsed()) graph_part(ev_truth, ev_extracted);
    if (ev_process->parsed()) process_part(ev_truth, ev_extracted, ev_truth_rules, ev_extracted_rules);
    if (ev_queries->parsed()) query_part(ev_graph, ev_truth, ev_candidates);
    if (ev_all->parsed()) {
      auto at = [&](const char *name) { return ev_dir + "/" + name; };
      auto exists = [](const std::string &p) { return std::ifstream(p).good(); };
      graph_part(at("graph_truth.cypher"), at("graph_extracted.cypher"));
      process_part(at("process_truth.puml"), at("process_extracted.puml"),
                   exists(at("rules_truth.rules")) ? at("rules_truth.rules") : "",
                   exists(at("rules_extracted.rules")) ? at("rules_extracted.rules") : "");
      query_part(at("graph_truth.cypher"), at("queries_truth.txt"), at("queries_candidates.txt"));
    }
    ctx.out << (Json(ev_format) ? eval::reports_to_json(reports) : eval::summarize(reports));
    return kOk;
  }
  if (repl->parsed()) {
    auto g = LoadGraph(repl_graph);
    std::optional<Endpoint> endpoint;
    std::string line;
    while (std::getline(ctx.in, line)) {
      auto t = std::string(trim(line));
      if (t.empty()) continue;
      if (t == "quit" || t == "exit") break;
      try {
        if (t.rfind("nl:", 0) == 0) {
          if (!endpoint) endpoint = Connect(repl_ep, ctx);
          gateway::Gateway gw(*endpoint->transport, endpoint->options);
          auto result = WithTranscript(repl_ep, [&] { return gw.nl_to_query(trim(t.substr(3)), g); });
          ctx.out << "query: " << result.text;
          auto table = kg::execute(result.value, g);
          ctx.out << (Json(repl_format) ? kg::table_to_json(table) : kg::render_table(table));
        } else {
          RunQueryLine(ctx, g, t, repl_format);
        }
      } catch (const ParseError &e) {
        ctx.err << "error[parse]: " << e.Describe() << "\n";
      } catch (const gateway::ExtractionError &e) {
        ctx.err << "error[endpoint]: " << e.what() << "\n";
      } catch (const std::exception &e) {
        ctx.err << "error[query]: " << e.what() << "\n";
      }
    }
    return kOk;
  }
  return kUsage;
}

}  // namespace

Environment default_environment() {
  Environment env;
  env.getenv = [](const std::string &name) -> std::optional<std::string> {
    const char *v = std::getenv(name.c_str());
    if (!v) return std::nullopt;
    return std::string(v);
  };
  env.make_transport = [](const gateway::EndpointConfig &config) -> std::unique_ptr<gateway::Transport> {
    return std::make_unique<gateway::HttpTransport>(config);
  };
  return env;
}

int run(const std::vector<std::string> &args, std::istream &in, std::ostream &out, std::ostream &err,
        const Environment &env) {
  Context ctx{in, out, err, env};
  try {
    return Dispatch(args, ctx);
  } catch (const SourcedParseError &e) {
    err << "error[parse]: " << e.file << ":" << e.error.line() << ":" << e.error.column() << ": "
        << e.error.message() << "\n";
    if (!e.error.snippet().empty()) err << "  | " << e.error.snippet() << "\n";
    return kUsage;
  } catch (const ParseError &e) {
    err << "error[parse]: " << e.Describe() << "\n";
    return kUsage;
  } catch (const IoError &e) {
    err << "error[io]: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError &e) {
    err << "error[usage]: " << e.what() << "\n";
    return kUsage;
  } catch (const model::ModelError &e) {
    err << "error[model]: " << e.what() << "\n";
    return kUsage;
  } catch (const kg::GraphError &e) {
    err << "error[graph]: " << e.what() << "\n";
    return kUsage;
  } catch (const kg::QueryError &e) {
    err << "error[query]: " << e.what() << "\n";
    return kUsage;
  } catch (const gateway::ExtractionError &e) {
    err << "error[endpoint]: " << e.what() << "\n";
    return kEndpoint;
  } catch (const std::invalid_argument &e) {
    err << "error[usage]: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception &e) {
    err << "error[internal]: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace rvsc::cli
