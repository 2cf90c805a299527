// convbrowse: conversational catalog browsing from the command line.

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "convbrowse/catalog.hpp"
#include "convbrowse/config.hpp"
#include "convbrowse/engine.hpp"
#include "convbrowse/errors.hpp"
#include "convbrowse/repl.hpp"
#include "convbrowse/search.hpp"
#include "convbrowse/service.hpp"
#include "convbrowse/simulator.hpp"
#include "convbrowse/synthetic.hpp"
#include "convbrowse/transcript.hpp"

#ifndef CONVBROWSE_DATA_DIR
#define CONVBROWSE_DATA_DIR "data"
#endif

namespace cb = convbrowse;

namespace {

struct CatalogArgs {
  std::string catalog = std::string(CONVBROWSE_DATA_DIR) + "/synthetic_catalog.csv";
  std::string manifest = std::string(CONVBROWSE_DATA_DIR) + "/synthetic_manifest.txt";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--catalog", catalog, "Catalog table")->capture_default_str();
    cmd->add_option("--manifest", manifest, "Catalog manifest")->capture_default_str();
  }

  cb::CatalogIndex load() const {
    return cb::CatalogIndex::load_file(catalog, cb::CatalogManifest::load_file(manifest));
  }
};

struct SelectionArgs {
  std::size_t l = 6;
  std::size_t linear_threshold = 0;
  std::size_t max_turns = 200;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--l", l, "Max entities per message")->capture_default_str();
    cmd->add_option("--linear-threshold", linear_threshold,
                    "Candidate count that triggers title listing (default l-1)");
    cmd->add_option("--max-turns", max_turns, "Hard stop")->capture_default_str();
  }

  cb::SelectionConfig config() const {
    cb::SelectionConfig c;
    c.l = l;
    if (linear_threshold > 0) c.linear_threshold = linear_threshold;
    c.max_turns = max_turns;
    c.validate();
    return c;
  }
};

std::ostream* open_output(const std::string& path, std::unique_ptr<std::ofstream>& holder) {
  if (path.empty() || path == "-") return &std::cout;
  holder = std::make_unique<std::ofstream>(path, std::ios::binary);
  if (!*holder) throw cb::ConfigurationError("cannot write " + path);
  return holder.get();
}

cb::HttpService* g_service = nullptr;

void on_signal(int) {
  if (g_service != nullptr) g_service->stop();
}

int cmd_serve(const std::string& config_path, CatalogArgs& catalog_args, SelectionArgs& sel,
              const std::string& host, int port, const std::string& templates,
              const std::string& transcripts, bool explicit_catalog) {
  cb::ServerConfig config;
  if (!config_path.empty()) {
    config = cb::ServerConfig::load_file(config_path);
  } else {
    config.selection = sel.config();
    config.host = host;
    config.port = port;
  }
  if (config_path.empty() || explicit_catalog) {
    config.catalog = catalog_args.catalog;
    config.manifest = catalog_args.manifest;
  }
  if (!templates.empty()) config.templates = templates;
  if (!transcripts.empty()) config.transcript_dir = transcripts;
  config.apply_environment();
  config.validate();

  const auto index =
      cb::CatalogIndex::load_file(config.catalog, cb::CatalogManifest::load_file(config.manifest));
  auto table = config.templates ? cb::TemplateTable::load_file(*config.templates)
                                : cb::TemplateTable::defaults();
  cb::SessionStore::Options options;
  options.idle_expiry = config.idle_expiry;
  options.transcript_dir = config.transcript_dir;
  cb::HttpService service(index, config.selection, std::move(table), options);
  const int bound = service.bind(config.host, config.port);
  if (bound < 0) throw cb::ConfigurationError("cannot bind " + config.host + ":" + std::to_string(config.port));
  std::cerr << "serving " << index.item_count() << " items on http://" << config.host << ":"
            << bound << "\n";
  g_service = &service;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  service.listen();
  g_service = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conversational browsing over a tabular catalog"};
  app.require_subcommand(1);

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  CatalogArgs serve_catalog;
  SelectionArgs serve_sel;
  std::string config_path, host = "127.0.0.1", templates, transcripts;
  int port = 8080;
  serve_catalog.add_to(serve);
  serve_sel.add_to(serve);
  serve->add_option("--config", config_path, "Key/value config file");
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();
  serve->add_option("--templates", templates, "Template table file");
  serve->add_option("--transcripts", transcripts, "Directory for session transcripts");

  // chat
  auto* chat = app.add_subcommand("chat", "Interactive terminal session");
  CatalogArgs chat_catalog;
  SelectionArgs chat_sel;
  std::string chat_templates;
  chat_catalog.add_to(chat);
  chat_sel.add_to(chat);
  chat->add_option("--templates", chat_templates, "Template table file");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Simulate a rational Seeker");
  CatalogArgs sim_catalog;
  SelectionArgs sim_sel;
  std::string sim_item, sim_trace;
  bool sim_all = false;
  sim_catalog.add_to(simulate);
  sim_sel.add_to(simulate);
  simulate->add_option("--item", sim_item, "Goal item id (e.g. r4)");
  simulate->add_flag("--all", sim_all, "Simulate every item as the goal");
  simulate->add_option("--trace", sim_trace, "Write the transcript(s) here ('-' for stdout)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Turn statistics over a range of l");
  CatalogArgs sweep_catalog;
  SelectionArgs sweep_sel;
  std::string l_range = "3..8", sweep_out, sweep_trace;
  std::size_t runs = 500;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  sweep_catalog.add_to(sweep);
  sweep->add_option("--max-turns", sweep_sel.max_turns)->capture_default_str();
  sweep->add_option("--l", l_range, "Range a..b or list a,b,c")->capture_default_str();
  sweep->add_option("--runs", runs)->capture_default_str();
  sweep->add_option("--seed", seed)->capture_default_str();
  sweep->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
  sweep->add_option("--out", sweep_out, "Report file (default stdout)");
  sweep->add_option("--trace", sweep_trace, "Per-run transcript dump");

  // gen-catalog
  auto* gen = app.add_subcommand("gen-catalog", "Write a seeded synthetic catalog");
  std::uint64_t gen_seed = 42;
  std::size_t gen_items = 2000;
  std::string gen_spec, gen_out, gen_manifest;
  gen->add_option("--seed", gen_seed)->capture_default_str();
  gen->add_option("--items", gen_items)->capture_default_str();
  gen->add_option("--attributes", gen_spec, "name:vocabulary:skew[:multi],...");
  gen->add_option("--out", gen_out, "Output table (default stdout)");
  gen->add_option("--manifest-out", gen_manifest, "Also write a matching manifest");

  // validate-catalog
  auto* validate = app.add_subcommand("validate-catalog", "Check a catalog against its manifest");
  CatalogArgs val_catalog;
  val_catalog.add_to(validate);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve) {
      const bool explicit_catalog = serve->count("--catalog") > 0 || serve->count("--manifest") > 0;
      return cmd_serve(config_path, serve_catalog, serve_sel, host, port, templates, transcripts,
                       explicit_catalog);
    }

    if (*chat) {
      const auto index = chat_catalog.load();
      const cb::DialogueEngine engine(index, chat_sel.config(),
                                      chat_templates.empty()
                                          ? cb::TemplateTable::defaults()
                                          : cb::TemplateTable::load_file(chat_templates));
      const auto search = cb::SearchIndex::build(index);
      return cb::run_repl(engine, search, std::cin, std::cout);
    }

    if (*simulate) {
      const auto index = sim_catalog.load();
      const auto config = sim_sel.config();
      std::vector<std::string> goals;
      if (sim_all) {
        for (cb::ItemIndex i = 0; i < index.item_count(); ++i) goals.push_back(index.item_id(i));
      } else if (!sim_item.empty()) {
        goals.push_back(sim_item);
      } else {
        throw cb::ConfigurationError("simulate needs --item or --all");
      }
      std::unique_ptr<std::ofstream> holder;
      std::ostream* trace = sim_trace.empty() ? nullptr : open_output(sim_trace, holder);
      std::size_t failures = 0;
      for (const auto& id : goals) {
        const auto result = cb::simulate(index, config, cb::GoalSpec::for_item(index, id));
        if (!result.success) ++failures;
        std::cout << id << "\t" << result.turns << "\t" << (result.success ? "success" : "failure")
                  << "\n";
        if (trace) *trace << cb::export_transcript(result.transcript);
      }
      return failures == 0 ? 0 : 2;
    }

    if (*sweep) {
      const auto index = sweep_catalog.load();
      cb::SweepOptions options;
      options.base.max_turns = sweep_sel.max_turns;
      options.threads = threads;
      std::unique_ptr<std::ofstream> trace_holder;
      if (!sweep_trace.empty()) {
        auto* trace = open_output(sweep_trace, trace_holder);
        options.on_result = [trace](std::size_t, std::size_t, const cb::SimResult& r) {
          *trace << cb::export_transcript(r.transcript);
        };
      }
      const auto report = cb::sweep(index, cb::parse_l_values(l_range), runs, seed, options);
      std::unique_ptr<std::ofstream> holder;
      cb::write_sweep_table(*open_output(sweep_out, holder), report);
      return 0;
    }

    if (*gen) {
      const auto spec =
          gen_spec.empty() ? cb::default_attribute_spec() : cb::parse_attribute_spec(gen_spec);
      std::unique_ptr<std::ofstream> holder;
      *open_output(gen_out, holder) << cb::generate_synthetic_catalog(gen_seed, gen_items, spec);
      if (!gen_manifest.empty()) {
        std::ofstream m(gen_manifest);
        const auto manifest = cb::synthetic_manifest(spec);
        m << "identifier = " << manifest.identifier_attribute << "\nbrowsable = ";
        for (std::size_t i = 0; i < manifest.browsable_attributes.size(); ++i) {
          m << (i ? "," : "") << manifest.browsable_attributes[i];
        }
        m << "\nmulti_value_delimiter = ,\nfield_separator = ;\nname = " << manifest.name << "\n";
      }
      return 0;
    }

    if (*validate) {
      const auto index = val_catalog.load();
      const auto browsable = index.attributes().size() - 1;
      std::cout << index.item_count() << " items, " << browsable << " browsable attributes, "
                << index.browsable_entity_count() << " entities\n";
      const auto all = index.all_items();
      for (const auto& a : index.attributes()) {
        if (!a.browsable) continue;
        std::size_t covered = 0;
        for (cb::ItemIndex i = 0; i < index.item_count(); ++i) {
          for (const auto e : index.item_entities(i)) {
            if (index.entity(e).attribute == a.name) {
              ++covered;
              break;
            }
          }
        }
        const auto top = cb::ranked_entities(index, a.name, all, 0, 1);
        std::cout << "  " << a.name << ": " << a.entities.size() << " entities, " << covered
                  << " items covered";
        if (!top.empty()) std::cout << ", top '" << top[0].entity.value << "' (" << top[0].score << ")";
        std::cout << "\n";
      }
      return 0;
    }
  } catch (const cb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
