#include <set>

#include "rvsc/gateway.hpp"
#include "rvsc/text.hpp"

namespace rvsc::gateway {

void Transcript::append(TranscriptEntry entry) { entries_.push_back(std::move(entry)); }

std::string Transcript::to_jsonl() const {
  std::string out;
  for (const auto &e : entries_) {
    nlohmann::ordered_json j;
    j["attempt"] = e.attempt;
    j["request"] = e.request;
    j["response"] = e.response;
    j["outcome"] = e.outcome;
    j["wall_ms"] = e.wall_ms;
    std::string line = j.dump();
    if (!secret_.empty())
      for (std::size_t at = line.find(secret_); at != std::string::npos; at = line.find(secret_, at))
        line.replace(at, secret_.size(), "[REDACTED]");
    out += line + "\n";
  }
  return out;
}

GatewayOptions options_from(const EndpointConfig &config) {
  return {config.model_name, config.temperature, config.max_retries, config.api_key};
}

Gateway::Gateway(Transport &transport, GatewayOptions options) : transport_(transport), options_(std::move(options)) {
  if (options_.max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
}

template <typename T>
Extraction<T> Gateway::Run(const PromptTemplate &tmpl, const RenderedPrompt &prompt,
                           const std::vector<ImageInput> &images, const std::function<T(const std::string &)> &parse) {
  ChatRequest request{options_.model_name, options_.temperature, {}};
  if (!prompt.system.empty()) request.messages.push_back({"system", prompt.system, {}});
  if (!tmpl.format_hint.empty()) request.messages.push_back({"system", tmpl.format_hint, {}});
  request.messages.push_back({"user", prompt.user, images});

  Transcript transcript(options_.secret);
  std::optional<ParseError> last_parse;
  std::string last_problem;
  const int attempts = options_.max_retries + 1;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    TranscriptEntry entry;
    entry.attempt = attempt;
    entry.request = request_body(request, false);
    auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
      return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    };
    std::string response;
    try {
      response = transport_.complete(request);
    } catch (const TransportError &e) {
      entry.outcome = std::string("transport error: ") + e.what();
      entry.wall_ms = elapsed();
      transcript.append(std::move(entry));
      throw ExtractionError(std::string("endpoint failure: ") + e.what(), std::move(transcript), last_parse, true);
    }
    entry.response = response;
    entry.wall_ms = elapsed();
    std::string text = strip_code_fences(response);
    std::string feedback;
    try {
      T value = parse(text);
      entry.outcome = "ok";
      transcript.append(std::move(entry));
      return {std::move(value), std::move(text), std::move(transcript), {}};
    } catch (const ParseError &e) {
      last_parse = e;
      feedback = e.Describe();
    } catch (const model::ModelError &e) {
      feedback = std::string("invalid process: ") + e.what();
    } catch (const kg::GraphError &e) {
      feedback = std::string("invalid graph: ") + e.what();
    }
    last_problem = feedback;
    entry.outcome = "parse error: " + feedback;
    transcript.append(std::move(entry));
    request.messages.push_back({"assistant", response, {}});
    request.messages.push_back(
        {"user", "The previous answer was rejected by the parser:\n" + feedback + "\nReturn the corrected output only.",
         {}});
  }
  throw ExtractionError("no valid output after " + std::to_string(attempts) + " attempts; last error: " + last_problem,
                        std::move(transcript), last_parse, false);
}

namespace {

std::string ImageSlot(const std::vector<ImageInput> &images) {
  return images.size() == 1 ? "the attached diagram" : std::to_string(images.size()) + " attached diagrams";
}

Slots SourceSlots(std::string_view description, const std::vector<ImageInput> &images) {
  Slots s;
  if (!description.empty() || images.empty()) s["textual description"] = std::string(description);
  if (!images.empty()) s["input diagram"] = ImageSlot(images);
  return s;
}

}  // namespace

Extraction<ProcessExtraction> Gateway::extract_process(std::string_view description,
                                                       const diagram::DiagramAst *prior,
                                                       const std::vector<ImageInput> &images) {
  const auto &tmpl = prompt_template(PromptId::kPlantUml);
  Slots slots = SourceSlots(description, images);
  slots["PlantUML activity diagram text"] = prior ? diagram::serialize_ast(*prior) : "";
  std::function<ProcessExtraction(const std::string &)> parse = [](const std::string &text) {
    auto ast = diagram::parse_activity_diagram(text, "<model output>");
    auto m = model::lower_to_model(ast);
    return ProcessExtraction{std::move(ast), std::move(m)};
  };
  return Run(tmpl, render_prompt(tmpl, slots), images, parse);
}

Extraction<kg::PropertyGraph> Gateway::extract_graph(std::string_view description, const kg::PropertyGraph *prior,
                                                     const std::vector<ImageInput> &images) {
  const auto &tmpl = prompt_template(PromptId::kGraph);
  Slots slots = SourceSlots(description, images);
  slots["Neo4j graph model"] = prior ? kg::export_script(*prior) : "";
  slots["example knowledge graph model"] = std::string(example_graph_model());
  std::function<kg::PropertyGraph(const std::string &)> parse = [](const std::string &text) {
    auto g = kg::ingest_script(text);
    if (g.node_count() == 0) throw kg::GraphError("the answer contains no nodes");
    return g;
  };
  return Run(tmpl, render_prompt(tmpl, slots), images, parse);
}

Extraction<std::vector<rules::Rule>> Gateway::formalize_rules(std::string_view free_text,
                                                              const diagram::DiagramAst &diagram) {
  const auto &tmpl = prompt_template(PromptId::kRules);
  Slots slots{{"textual rules", std::string(free_text)},
              {"PlantUML activity diagram text", diagram::serialize_ast(diagram)}};
  std::function<std::vector<rules::Rule>(const std::string &)> parse = [](const std::string &text) {
    return rules::parse_rules(text);
  };
  auto result = Run(tmpl, render_prompt(tmpl, slots), {}, parse);

  auto m = model::lower_to_model(diagram);
  std::set<std::string> labels, lanes;
  for (const auto &n : m.nodes)
    if (n.kind == model::NodeKind::kActivity || n.kind == model::NodeKind::kDecision)
      labels.insert(normalize_label(n.label));
  for (const auto &p : m.participants) lanes.insert(normalize_label(p));
  for (const auto &r : result.value) {
    for (const auto &label : rules::activity_labels(r.body))
      if (!labels.count(normalize_label(label)))
        result.warnings.push_back("rule " + r.id + ": \"" + label + "\" is not an activity of the diagram");
    if (const auto *role = std::get_if<rules::Role>(&r.body))
      if (!lanes.count(normalize_label(role->role)))
        result.warnings.push_back("rule " + r.id + ": \"" + role->role + "\" is not a lane of the diagram");
  }
  return result;
}

Extraction<kg::QueryAst> Gateway::nl_to_query(std::string_view user_text, const kg::PropertyGraph &graph) {
  const auto &tmpl = prompt_template(PromptId::kQuery);
  Slots slots{{"user text", std::string(user_text)}, {"current graph schema", render_schema(graph)}};
  std::function<kg::QueryAst(const std::string &)> parse = [](const std::string &text) {
    return kg::parse_query(text);
  };
  return Run(tmpl, render_prompt(tmpl, slots), {}, parse);
}

}  // namespace rvsc::gateway
