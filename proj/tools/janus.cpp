// Copyright 2026 The Janus Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// janus: build an ontology from families of XSD files.

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"

#include "janus/http.hpp"
#include "janus/kb.hpp"
#include "janus/owl.hpp"

namespace fs = std::filesystem;
using namespace janus;

namespace {

kb::Config config_or_default(const std::string& path) {
  return path.empty() ? kb::Config{} : kb::load_config(path);
}

std::vector<ingest::FamilySpec> family_specs(const std::vector<std::vector<std::string>>& groups,
                                             const std::vector<std::string>& dirs) {
  std::vector<ingest::FamilySpec> out;
  for (const auto& g : groups) out.push_back({g.front(), {g.begin() + 1, g.end()}});
  for (const auto& d : dirs) {
    auto name = fs::path(d).lexically_normal().filename().string();
    if (name.empty() || name == ".") name = fs::absolute(d).lexically_normal().parent_path().filename().string();
    out.push_back({name, {d}});
  }
  return out;
}

// Families recorded in a knowledge base, one path per document.
std::vector<ingest::FamilySpec> stored_specs(const kb::KnowledgeBase& kb) {
  std::vector<ingest::FamilySpec> out;
  for (const auto& f : kb.corpus.families) {
    ingest::FamilySpec spec{f.name, {}};
    for (const auto& d : f.docs) spec.paths.push_back(d.source_path);
    out.push_back(std::move(spec));
  }
  return out;
}

void print_report(const ingest::IngestReport& r) {
  std::cerr << "parsed " << r.files_parsed << " file(s)";
  for (const auto& [kind, n] : r.nodes_extracted) std::cerr << ", " << n << " " << kind;
  std::cerr << "\n";
  for (const auto& [path, msg] : r.errors) std::cerr << "warning: " << msg << "\n";
  for (const auto& [doc, name] : r.unresolved_refs) std::cerr << "warning: unresolved " << name << " in " << doc << "\n";
  for (const auto& [doc, name] : r.cycles) std::cerr << "warning: cycle through " << name << " in " << doc << "\n";
}

void print_summary(const kb::KnowledgeBase& kb) {
  const auto& net = kb.network;
  std::cerr << net.count(taxonomy::ConceptKind::kClass) << " classes, " << net.count(taxonomy::ConceptKind::kProperty)
            << " properties, " << net.edges.size() << " relationships\n";
}

void write_output(const std::string& bytes, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << bytes;
    return;
  }
  std::ofstream f(out, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIoError, "cannot write " + out);
  f << bytes;
  if (!f.flush()) throw Error(ErrorCode::kIoError, "write failed for " + out);
}

void print_stats(const kb::KnowledgeBase& kb, std::size_t top) {
  const auto& c = kb.corpus;
  std::cout << "corpus " << c.corpus_id << "\n";
  for (const auto& f : c.families) std::cout << "  family " << f.family_id << ": " << f.docs.size() << " document(s)\n";
  std::cout << "raw nodes " << c.nodes.size();
  for (const auto& [kind, n] : c.report.nodes_extracted) std::cout << "  " << kind << "=" << n;
  std::cout << "\n";
  if (!c.report.ignored_constructs.empty()) {
    std::cout << "ignored";
    for (const auto& [what, n] : c.report.ignored_constructs) std::cout << "  " << what << "=" << n;
    std::cout << "\n";
  }

  const auto& net = kb.network;
  std::cout << "\nconcepts " << net.nodes.size() << "  classes=" << net.count(taxonomy::ConceptKind::kClass)
            << "  properties=" << net.count(taxonomy::ConceptKind::kProperty) << "\n";
  std::cout << "relationships " << net.edges.size();
  for (auto k : taxonomy::kAllRelationKinds) {
    std::cout << "  " << to_string(k) << "="
              << std::count_if(net.edges.begin(), net.edges.end(), [k](const auto& e) { return e.kind == k; });
  }
  std::cout << "\n";
  for (const auto& [id, n] : net.nodes) {
    if (n.merged_from.empty()) continue;
    std::cout << "  merged into " << id << ":";
    for (const auto& m : n.merged_from) std::cout << " " << m;
    std::cout << "\n";
  }
  if (!net.provenance.filtered_out.empty()) std::cout << "filtered " << net.provenance.filtered_out.size() << "\n";

  std::vector<const lexical::TermStats*> terms;
  for (const auto& [t, s] : c.term_stats) terms.push_back(&s);
  std::stable_sort(terms.begin(), terms.end(),
                   [](const auto* a, const auto* b) { return a->global_frequency > b->global_frequency; });
  std::cout << "\nterm                 freq  families  docs\n";
  for (std::size_t i = 0; i < terms.size() && i < top; ++i) {
    std::cout << std::left << std::setw(20) << terms[i]->term << std::right << std::setw(5)
              << terms[i]->global_frequency << std::setw(10) << terms[i]->family_attendance() << std::setw(6)
              << terms[i]->document_frequency << "\n";
  }

  std::cout << "\nassociation rules (support >= " << c.mining.min_support
            << ", confidence >= " << c.mining.min_confidence << ")\n";
  for (const auto& r : c.associations) {
    std::cout << "  {";
    for (std::size_t i = 0; i < r.antecedent.size(); ++i) std::cout << (i ? ", " : "") << r.antecedent[i];
    std::cout << "} -> " << r.consequent << std::fixed << std::setprecision(3) << "  support " << r.support
              << "  confidence " << r.confidence << std::defaultfloat << "\n";
  }

  std::cout << "\nbuilds\n";
  for (std::size_t i = 0; i < kb.history.size(); ++i) {
    const auto& h = kb.history[i];
    std::cout << "  #" << i + 1 << " " << h.timestamp << "  align=" << h.params.align_threshold
              << " merge=" << h.params.merge_threshold << " min_freq=" << h.params.min_frequency << "  nodes "
              << h.node_count << "  edges " << h.edge_count << "\n";
  }
}

httplib::Server* g_server = nullptr;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Builds an OWL ontology from families of XML Schema files."};
  app.require_subcommand(1);
  std::string kb_path = "janus.kb.json";
  app.add_option("--kb", kb_path, "Knowledge base file")->capture_default_str();

  auto* ingest_cmd = app.add_subcommand("ingest", "Ingest XSD families and build a new knowledge base");
  std::vector<std::vector<std::string>> family_groups;
  std::vector<std::string> family_dirs;
  std::string ingest_config;
  ingest_cmd->add_option("--family", family_groups, "NAME PATH... (repeatable)")
      ->expected(2, CLI::detail::expected_max_vector_size);
  ingest_cmd->add_option("dirs", family_dirs, "Directories, one family each, named after the directory");
  ingest_cmd->add_option("--config", ingest_config, "Config file (key=value)");

  auto* build_cmd = app.add_subcommand("build", "Re-run the pipeline on the stored families");
  std::string build_config;
  build_cmd->add_option("--config", build_config, "Config file (key=value)");

  auto* export_cmd = app.add_subcommand("export", "Export the current network");
  std::string format = "ttl";
  std::string out;
  export_cmd->add_option("--format", format, "ttl, rdfxml or json")
      ->check(CLI::IsMember({"ttl", "rdfxml", "json"}))
      ->capture_default_str();
  export_cmd->add_option("--out", out, "Output file (default stdout)");

  auto* stats_cmd = app.add_subcommand("stats", "Print corpus and network statistics");
  std::size_t top = 20;
  stats_cmd->add_option("--top", top, "Number of terms to list")->capture_default_str();

  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
  int port = 8080;
  std::string host = "127.0.0.1";
  serve_cmd->add_option("--port", port, "Port")->capture_default_str();
  serve_cmd->add_option("--host", host, "Bind address")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest_cmd) {
      const auto specs = family_specs(family_groups, family_dirs);
      const auto kb = kb::run_pipeline(specs, config_or_default(ingest_config));
      print_report(kb.corpus.report);
      print_summary(kb);
      kb::save_kb(kb, kb_path);
    } else if (*build_cmd) {
      const auto previous = kb::load_kb(kb_path);
      auto kb = kb::run_pipeline(stored_specs(previous), config_or_default(build_config));
      kb.history.insert(kb.history.begin(), previous.history.begin(), previous.history.end());
      print_report(kb.corpus.report);
      print_summary(kb);
      kb::save_kb(kb, kb_path);
    } else if (*export_cmd) {
      const auto kb = kb::load_kb(kb_path);
      if (format == "json") {
        write_output(owl::serialize_json_graph(kb.network) + "\n", out);
      } else {
        const owl::Vocabulary vocab(kb.base_namespace);
        write_output(owl::serialize(owl::to_rdf_graph(kb.network, vocab), owl::rdf_format_from_string(format), vocab),
                     out);
      }
    } else if (*stats_cmd) {
      print_stats(kb::load_kb(kb_path), top);
    } else if (*serve_cmd) {
      service::SnapshotStore store(kb::load_kb(kb_path), kb::utc_now,
                                   [&](const kb::KnowledgeBase& kb) { kb::save_kb(kb, kb_path); });
      httplib::Server server;
      http::mount(server, store);
      g_server = &server;
      std::signal(SIGINT, [](int) { g_server->stop(); });
      std::signal(SIGTERM, [](int) { g_server->stop(); });
      if (!server.bind_to_port(host, port)) throw Error(ErrorCode::kIoError, "cannot bind " + host + ":" + std::to_string(port));
      std::cerr << "serving " << kb_path << " on http://" << host << ":" << port << "\n";
      server.listen_after_bind();
    }
  } catch (const Error& e) {
    std::cerr << "janus: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
