#pragma once

#include <chrono>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rvsc/diagram.hpp"
#include "rvsc/graph.hpp"
#include "rvsc/parse_error.hpp"
#include "rvsc/process_model.hpp"
#include "rvsc/query.hpp"
#include "rvsc/rules.hpp"

namespace rvsc::gateway {

// ---- prompts -------------------------------------------------------------

enum class PromptId { kPlantUml, kRules, kGraph, kQuery };

struct PromptTemplate {
  PromptId id;
  std::string name;    // P1_PLANTUML, P2_RULES, P3_GRAPH, P4_QUERY
  std::string system;  // may be empty
  std::string user;
  // Output-format guidance sent as a separate system message.
  std::string format_hint;
};

const PromptTemplate &prompt_template(PromptId id);

// Slot values keyed by slot name without brackets, e.g. "user text".
using Slots = std::map<std::string, std::string>;

struct RenderedPrompt {
  std::string system;
  std::string user;
};

class PromptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Replaces every [slot] with its value. "[a]/[b]" is an alternative: at least
// one of a, b must be given; when both are, they are joined by '/'. Throws
// PromptError naming the first missing slot.
RenderedPrompt render_prompt(const PromptTemplate &tmpl, const Slots &slots);

// Sample graph script used for the example slot of the graph prompt.
std::string_view example_graph_model();

// Deterministic schema text: node labels with property keys, then
// relationship patterns (:From)-[:TYPE]->(:To), all sorted.
std::string render_schema(const kg::PropertyGraph &graph);

// Removes a surrounding Markdown code fence, if any.
std::string strip_code_fences(std::string_view text);

// ---- transport ------------------------------------------------------------

struct ImageInput {
  std::string media_type;  // e.g. image/png
  std::string base64;
};

struct ChatMessage {
  std::string role;  // system | user | assistant
  std::string content;
  std::vector<ImageInput> images;
};

struct ChatRequest {
  std::string model;
  double temperature = 0.0;
  std::vector<ChatMessage> messages;
};

// OpenAI-compatible request body; images become data-URL content parts.
nlohmann::json request_body(const ChatRequest &request, bool include_image_data = true);

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Transport {
 public:
  virtual ~Transport() = default;
  // Returns the assistant message text; throws TransportError.
  virtual std::string complete(const ChatRequest &request) = 0;
};

struct EndpointConfig {
  std::string base_url;
  std::string api_key;
  std::string model_name;
  double temperature = 0.0;
  int timeout_seconds = 120;
  int max_retries = 3;
};

// Throws std::invalid_argument on an empty base_url or negative max_retries.
void validate_config(const EndpointConfig &config);

// Reads an optional JSON file (keys base_url, api_key, model, temperature,
// timeout, max_retries), then applies RVSC_BASE_URL, RVSC_API_KEY, RVSC_MODEL,
// RVSC_TEMPERATURE, RVSC_TIMEOUT, RVSC_MAX_RETRIES from `env`.
EndpointConfig load_config(const std::optional<std::string> &path,
                           const std::function<std::optional<std::string>(const std::string &)> &env);

// POST {base_url}/chat/completions with a bearer key.
class HttpTransport : public Transport {
 public:
  explicit HttpTransport(EndpointConfig config);
  std::string complete(const ChatRequest &request) override;

 private:
  EndpointConfig config_;
};

// Replays canned responses in order; throws TransportError when exhausted.
class ScriptedTransport : public Transport {
 public:
  explicit ScriptedTransport(std::vector<std::string> responses);
  std::string complete(const ChatRequest &request) override;
  std::size_t calls() const { return requests_.size(); }
  const std::vector<ChatRequest> &requests() const { return requests_; }

 private:
  std::deque<std::string> responses_;
  std::vector<ChatRequest> requests_;
};

// Refuses every call. Used to prove that offline paths never reach a model.
class FailingTransport : public Transport {
 public:
  std::string complete(const ChatRequest &request) override;
  std::size_t calls() const { return calls_; }

 private:
  std::size_t calls_ = 0;
};

// ---- transcript -----------------------------------------------------------

struct TranscriptEntry {
  int attempt = 0;
  nlohmann::json request;
  std::string response;
  std::string outcome;  // "ok", "parse error: ...", "transport error: ..."
  double wall_ms = 0.0;
};

class Transcript {
 public:
  explicit Transcript(std::string secret = {}) : secret_(std::move(secret)) {}
  void append(TranscriptEntry entry);
  const std::vector<TranscriptEntry> &entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  // One JSON object per line.
  std::string to_jsonl() const;

 private:
  std::string secret_;
  std::vector<TranscriptEntry> entries_;
};

// ---- extraction -----------------------------------------------------------

template <typename T>
struct Extraction {
  T value;
  std::string text;  // validated model output, fences removed
  Transcript transcript;
  std::vector<std::string> warnings;
};

struct ProcessExtraction {
  diagram::DiagramAst diagram;
  model::ProcessModel model;
};

class ExtractionError : public std::runtime_error {
 public:
  ExtractionError(const std::string &what, Transcript transcript, std::optional<ParseError> last_parse_error,
                  bool transport_failure)
      : std::runtime_error(what),
        transcript_(std::move(transcript)),
        last_parse_error_(std::move(last_parse_error)),
        transport_failure_(transport_failure) {}

  const Transcript &transcript() const { return transcript_; }
  const std::optional<ParseError> &last_parse_error() const { return last_parse_error_; }
  bool transport_failure() const { return transport_failure_; }

 private:
  Transcript transcript_;
  std::optional<ParseError> last_parse_error_;
  bool transport_failure_;
};

struct GatewayOptions {
  std::string model_name;
  double temperature = 0.0;
  int max_retries = 3;
  std::string secret;  // redacted from transcripts
};

GatewayOptions options_from(const EndpointConfig &config);

// Every call renders a prompt, asks the transport, and accepts only output
// the deterministic parsers accept. A rejected output is fed back as an
// assistant turn plus a user turn carrying the parser message; at most
// max_retries + 1 calls are made.
class Gateway {
 public:
  Gateway(Transport &transport, GatewayOptions options);

  Extraction<ProcessExtraction> extract_process(std::string_view description, const diagram::DiagramAst *prior,
                                                const std::vector<ImageInput> &images = {});
  Extraction<kg::PropertyGraph> extract_graph(std::string_view description, const kg::PropertyGraph *prior,
                                              const std::vector<ImageInput> &images = {});
  // Labels the diagram does not define are reported as warnings.
  Extraction<std::vector<rules::Rule>> formalize_rules(std::string_view free_text, const diagram::DiagramAst &diagram);
  Extraction<kg::QueryAst> nl_to_query(std::string_view user_text, const kg::PropertyGraph &graph);

 private:
  template <typename T>
  Extraction<T> Run(const PromptTemplate &tmpl, const RenderedPrompt &prompt, const std::vector<ImageInput> &images,
                    const std::function<T(const std::string &)> &parse);

  Transport &transport_;
  GatewayOptions options_;
};

}  // namespace rvsc::gateway
