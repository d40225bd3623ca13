// domscore: score rendered-page snapshots, summarize and clean snapshot
// corpora, and run the HTTP reward service.

#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "domscore/corpus.hpp"
#include "domscore/scoring.hpp"
#include "domscore/service.hpp"
#include "domscore/snapshot.hpp"

namespace {

using namespace domscore;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitInvalid = 2;

struct GlobalOptions {
  std::string format = "json";
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  RewardWeights weights;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_report_table(const ScoreReport& r, std::ostream& os) {
  auto row = [&](std::string_view name, double v) {
    os << std::left << std::setw(8) << name << std::right << std::setw(12) << std::fixed << std::setprecision(4) << v
       << '\n';
  };
  row("RDA", r.rda);
  row("GDA", r.gda);
  row("SDA", r.sda);
  row("reward", r.reward);
  os << "matched " << r.association.pairs.size() << " of " << r.reference_elements << " reference elements ("
     << r.association.unmatched_candidate.size() << " candidate elements unmatched)\n";
}

int cmd_score(const GlobalOptions& g, const std::string& candidate_path, const std::string& reference_path,
              bool verbose) {
  std::string candidate_doc, reference_doc;
  try {
    candidate_doc = read_file(candidate_path);
    reference_doc = read_file(reference_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }

  const char* side = candidate_path.c_str();
  try {
    const auto candidate = parse_snapshot(candidate_doc);
    side = reference_path.c_str();
    const auto reference = parse_snapshot(reference_doc);
    ScoringOptions options;
    options.weights = g.weights;
    const auto report = score_pair(candidate, reference, options);
    if (g.format == "table")
      print_report_table(report, std::cout);
    else
      std::cout << to_json(report, verbose).dump(2) << '\n';
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << "error: " << side << ": " << to_string(e.kind()) << " at '" << e.path() << "': " << e.what()
              << '\n';
    return kExitInvalid;
  }
}

int cmd_stats(const GlobalOptions& g, const std::string& dir, const BinSpec& bins) {
  CorpusStats stats;
  try {
    stats = corpus_stats(dir, bins, g.workers);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  if (stats.skipped > 0) std::cerr << "warning: skipped " << stats.skipped << " unparseable file(s)\n";
  if (g.format == "table")
    std::cout << to_table(stats);
  else
    std::cout << to_json(stats).dump(2) << '\n';
  return kExitOk;
}

int cmd_filter(const GlobalOptions& g, const std::string& in_dir, const std::string& out_dir,
               const FilterOptions& options, const std::string& manifest_path) {
  std::vector<FilterDecision> decisions;
  try {
    decisions = filter_corpus(in_dir, out_dir, options, g.workers);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  const auto manifest = to_json(decisions);
  if (!manifest_path.empty()) {
    std::ofstream out(manifest_path);
    out << manifest.dump(2) << '\n';
    if (!out) {
      std::cerr << "error: cannot write " << manifest_path << '\n';
      return kExitIo;
    }
  }
  if (g.format == "table") {
    std::cout << "kept " << manifest["kept"].size() << ", dropped " << manifest["dropped"].size() << '\n';
    for (const auto& d : decisions)
      if (!d.kept) std::cout << std::left << std::setw(40) << d.file << d.reason << "  " << d.detail << '\n';
  } else {
    std::cout << manifest.dump(2) << '\n';
  }
  return kExitOk;
}

HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

int cmd_serve(const GlobalOptions& g, ServiceConfig config) {
  config.workers = g.workers;
  config.default_weights = g.weights;
  try {
    HttpServer server(config);
    const int port = server.bind();
    if (port < 0) {
      std::cerr << "error: cannot bind " << config.host << ":" << config.port << '\n';
      return kExitIo;
    }
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "listening on " << config.host << ":" << port << " (" << config.workers << " workers)\n";
    server.listen();
    g_server = nullptr;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Layout and style similarity scoring for rendered web pages"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"json", "table"}))
      ->envname("DOMSCORE_FORMAT")
      ->capture_default_str();
  app.add_option("--workers", g.workers, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->envname("DOMSCORE_WORKERS")
      ->capture_default_str();
  app.add_option("--alpha", g.weights.alpha, "Weight of the layout score")
      ->check(CLI::NonNegativeNumber)
      ->envname("DOMSCORE_ALPHA")
      ->capture_default_str();
  app.add_option("--beta", g.weights.beta, "Weight of the group score")
      ->check(CLI::NonNegativeNumber)
      ->envname("DOMSCORE_BETA")
      ->capture_default_str();
  app.add_option("--gamma", g.weights.gamma, "Weight of the style score")
      ->check(CLI::NonNegativeNumber)
      ->envname("DOMSCORE_GAMMA")
      ->capture_default_str();

  auto* score = app.add_subcommand("score", "Score a candidate snapshot against a reference snapshot");
  std::string candidate_path, reference_path;
  bool verbose = false;
  score->add_option("candidate", candidate_path, "Candidate snapshot JSON")->required();
  score->add_option("reference", reference_path, "Reference snapshot JSON")->required();
  score->add_flag("-v,--verbose", verbose, "Include per-pair diagnostics")->envname("DOMSCORE_VERBOSE");

  auto* stats = app.add_subcommand("stats", "Tag count, DOM depth and Group Count statistics of a corpus");
  std::string stats_dir;
  std::string bin_preset = "fine";
  std::vector<double> bin_edges;
  stats->add_option("corpus", stats_dir, "Directory of snapshot JSON files")->required();
  stats->add_option("--bins", bin_preset, "Bin preset: fine (0-50 ... 400+) or coarse (0-200, 200-400, 400+)")
      ->check(CLI::IsMember({"fine", "coarse"}))
      ->envname("DOMSCORE_BINS")
      ->capture_default_str();
  stats->add_option("--edges", bin_edges, "Custom ascending bin edges starting at 0")->envname("DOMSCORE_EDGES");

  auto* filter = app.add_subcommand("filter", "Drop over-tall and style-deficient pages from a corpus");
  std::string filter_in, filter_out, manifest_path;
  FilterOptions filter_options;
  filter->add_option("corpus", filter_in, "Input directory")->required();
  filter->add_option("out", filter_out, "Output directory for kept snapshots")->required();
  filter->add_option("--max-height", filter_options.max_height, "Drop pages taller than this (px)")
      ->envname("DOMSCORE_MAX_HEIGHT")
      ->capture_default_str();
  filter->add_option("--style-threshold", filter_options.style_threshold,
                     "Drop pages whose style quality score exceeds this")
      ->envname("DOMSCORE_STYLE_THRESHOLD")
      ->capture_default_str();
  filter->add_option("--manifest", manifest_path, "Also write the manifest to this file")
      ->envname("DOMSCORE_MANIFEST");

  auto* serve = app.add_subcommand("serve", "Run the HTTP reward service");
  ServiceConfig service_config;
  serve->add_option("--host", service_config.host, "Bind address")->envname("DOMSCORE_HOST")->capture_default_str();
  serve->add_option("--port", service_config.port, "Port (0 picks a free port)")
      ->check(CLI::Range(0, 65535))
      ->envname("DOMSCORE_PORT")
      ->capture_default_str();
  serve->add_option("--bridge", service_config.bridge_command,
                    "Command rendering an HTML file (appended path) to snapshot JSON on stdout")
      ->envname("DOMSCORE_BRIDGE");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version print and exit 0; every usage error maps to 2.
    return app.exit(e) == 0 ? kExitOk : kExitInvalid;
  }

  try {
    g.weights.validate();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  if (score->parsed()) return cmd_score(g, candidate_path, reference_path, verbose);
  if (stats->parsed()) {
    try {
      const BinSpec bins = !bin_edges.empty() ? BinSpec(bin_edges)
                           : bin_preset == "coarse" ? BinSpec::coarse()
                                                    : BinSpec::fine();
      return cmd_stats(g, stats_dir, bins);
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitInvalid;
    }
  }
  if (filter->parsed()) return cmd_filter(g, filter_in, filter_out, filter_options, manifest_path);
  if (serve->parsed()) return cmd_serve(g, service_config);
  return kExitOk;
}
