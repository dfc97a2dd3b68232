// irx: index, rank, explain and compare rankings from the command line.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "irx/axioms.hpp"
#include "irx/error.hpp"
#include "irx/evaluation.hpp"
#include "irx/index.hpp"
#include "irx/listwise.hpp"
#include "irx/pointwise.hpp"
#include "irx/rankers.hpp"
#include "irx/run_file.hpp"

namespace {

using nlohmann::json;

enum Exit { kOk = 0, kIo = 1, kUsage = 2, kNotFound = 3 };

struct UsageError : irx::Error {
  using irx::Error::Error;
};

// Options shared by the commands that need an index and a query.
struct Common {
  std::string index_path;
  std::string topics_path;
  std::string qid;
  std::string query_text;
  std::string out_path;
  std::string params_path;
  std::uint64_t seed = 0;
  std::string model = "bm25";
  std::string hidden;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw irx::IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw irx::IoError("cannot write " + out_path);
  out << text;
}

// "--rate 0.5" style extras. Values that parse as JSON keep their type.
json parse_overrides(const std::vector<std::string>& extras) {
  json out = json::object();
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& flag = extras[i];
    if (flag.rfind("--", 0) != 0 || flag.size() < 3)
      throw UsageError("unexpected argument '" + flag + "'");
    std::string key = flag.substr(2);
    std::string value;
    if (auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key.resize(eq);
    } else {
      if (i + 1 >= extras.size()) throw UsageError("missing value for " + flag);
      value = extras[++i];
    }
    std::replace(key.begin(), key.end(), '-', '_');
    json parsed = json::parse(value, nullptr, false);
    out[key] = parsed.is_discarded() ? json(value) : parsed;
  }
  return out;
}

json load_params(const Common& c, const std::vector<std::string>& extras) {
  json params = json::object();
  if (!c.params_path.empty()) {
    json file = json::parse(read_file(c.params_path), nullptr, false);
    if (file.is_discarded() || !file.is_object())
      throw irx::ParseError(c.params_path + ": parameters must be a JSON object", 1);
    params = std::move(file);
  }
  params.update(parse_overrides(extras));
  params["seed"] = c.seed;
  return params;
}

// Removes ranker settings from `params` and returns them.
irx::RankerParams take_ranker_params(json& params) {
  irx::RankerParams rp;
  auto take = [&](const char* key, double& slot) {
    if (auto it = params.find(key); it != params.end()) {
      slot = it->get<double>();
      params.erase(it);
    }
  };
  take("k1", rp.bm25.k1);
  take("b", rp.bm25.b);
  take("lambda", rp.lmjm.lambda);
  take("mu", rp.lmdir.mu);
  return rp;
}

// "term:weight,term:weight"; terms go through the index analyzer.
std::vector<irx::WeightedTerm> parse_hidden(const irx::PositionalIndex& index,
                                            const std::string& text) {
  std::vector<irx::WeightedTerm> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    double weight = 1.0;
    std::string term = item;
    if (auto colon = item.rfind(':'); colon != std::string::npos) {
      term = item.substr(0, colon);
      const std::string w = item.substr(colon + 1);
      auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), weight);
      if (ec != std::errc() || ptr != w.data() + w.size())
        throw UsageError("bad hidden term weight '" + w + "'");
    }
    const auto analyzed = index.analyze(term);
    if (analyzed.size() != 1)
      throw UsageError("hidden term '" + term + "' must analyze to one token");
    out.push_back({analyzed.front(), weight});
  }
  return out;
}

irx::RankerPtr build_model(const irx::PositionalIndex& index, const Common& c,
                           const irx::RankerParams& rp) {
  irx::RankerPtr base = irx::make_ranker(c.model, rp);
  if (c.hidden.empty()) return base;
  return irx::hidden_intent_ranker(std::move(base), parse_hidden(index, c.hidden));
}

irx::Query resolve_query(const irx::PositionalIndex& index, const Common& c) {
  if (!c.query_text.empty())
    return irx::Query::parse(index, c.qid.empty() ? "q" : c.qid, c.query_text);
  if (c.topics_path.empty()) throw UsageError("need --query or --topics with --qid");
  if (c.qid.empty()) throw UsageError("--topics requires --qid");
  for (const auto& t : irx::read_topics(c.topics_path))
    if (t.qid == c.qid) return irx::Query::parse(index, t.qid, t.text);
  throw irx::NotFound("qid " + c.qid + " not in " + c.topics_path);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

void add_common(CLI::App* app, Common& c, bool needs_query) {
  app->add_option("--index", c.index_path, "Serialized index")->required();
  app->add_option("--out,-o", c.out_path, "Output file (default stdout)");
  app->add_option("--params", c.params_path, "JSON parameter file");
  app->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  app->add_option("--model", c.model, "Ranker: bm25, lmjm or lmdir")
      ->capture_default_str()
      ->check(CLI::IsMember(irx::simple_ranker_names()));
  app->add_option("--hidden", c.hidden,
                  "Hidden intent terms for the model, term:weight,...");
  app->add_option("--topics", c.topics_path, "Topics TSV");
  if (needs_query) {
    app->add_option("--qid", c.qid, "Query id");
    app->add_option("--query", c.query_text, "Query text (instead of --topics)");
  }
  app->allow_extras();
}

// Subcommands ------------------------------------------------------------

int cmd_index(const std::string& corpus, const std::string& out, bool no_stem,
              bool keep_stopwords) {
  const auto docs = irx::read_corpus_jsonl(corpus);
  if (docs.empty()) throw irx::ParseError(corpus + ": corpus is empty", 1);
  irx::AnalyzerConfig config;
  if (no_stem) config.stem = false;
  if (keep_stopwords) config.stopwords.clear();
  const auto index = irx::build_index(docs, config);
  index.save_file(out);
  std::cout << index.num_docs() << " docs, " << index.vocabulary_size() << " terms\n";
  return kOk;
}

int cmd_rank(const Common& c, const std::vector<std::string>& extras,
             std::size_t depth, const std::string& tag) {
  if (c.topics_path.empty()) throw UsageError("rank requires --topics");
  json params = load_params(c, extras);
  params.erase("seed");
  const auto rp = take_ranker_params(params);
  if (!params.empty())
    throw UsageError("unknown ranking parameter '" + params.begin().key() + "'");
  const auto index = irx::PositionalIndex::load_file(c.index_path);
  const auto model = build_model(index, c, rp);
  irx::RunFile run;
  for (const auto& t : irx::read_topics(c.topics_path)) {
    const auto q = irx::Query::parse(index, t.qid, t.text);
    auto list = irx::rank(index, *model, q, std::nullopt, depth);
    if (list.empty()) continue;
    list.tag = tag;
    run.put(std::move(list));
  }
  std::ostringstream out;
  irx::write_run(out, run);
  emit(c.out_path, out.str());
  return kOk;
}

int cmd_pointwise(const Common& c, const std::vector<std::string>& extras,
                  const std::string& method, const std::string& docid,
                  const std::string& format) {
  json params = load_params(c, extras);
  const auto rp = take_ranker_params(params);
  irx::PointwiseParams pp;
  irx::apply_params(pp, params);
  pp.validate();

  const auto index = irx::PositionalIndex::load_file(c.index_path);
  if (!index.contains(docid)) throw irx::NotFound("docid " + docid + " not in index");
  const auto model = build_model(index, c, rp);
  const auto query = resolve_query(index, c);

  std::unique_ptr<irx::PointwiseExplainer> explainer;
  if (method == "lirme")
    explainer = std::make_unique<irx::LirmeExplainer>(index, model, pp);
  else
    explainer = std::make_unique<irx::ExsExplainer>(index, model, pp);

  irx::PointwiseExplanation e;
  e.qid = query.qid;
  e.docid = docid;
  e.method = explainer->method();
  e.params = irx::params_to_json(pp);
  e.terms = explainer->explain(query, docid);
  if (format == "text")
    emit(c.out_path, irx::visualize_terms(e.terms, irx::RenderFormat::text));
  else
    emit(c.out_path, irx::to_json(e).dump() + "\n");
  return kOk;
}

int cmd_pairwise(const Common& c, const std::string& axioms_arg,
                 const std::string& doc1, const std::string& doc2, bool details,
                 const std::string& format) {
  const auto names = split_list(axioms_arg);
  if (names.empty()) throw UsageError("--axioms is empty");
  const auto& valid = irx::axiom_names();
  for (const auto& n : names)
    if (std::find(valid.begin(), valid.end(), n) == valid.end()) {
      std::string list;
      for (const auto& v : valid) list += (list.empty() ? "" : ", ") + v;
      throw UsageError("unknown axiom '" + n + "' (valid: " + list + ")");
    }

  const auto index = irx::PositionalIndex::load_file(c.index_path);
  for (const auto& d : {doc1, doc2})
    if (!index.contains(d)) throw irx::NotFound("docid " + d + " not in index");
  const auto query = resolve_query(index, c);

  std::string out;
  if (details) {
    for (const auto& n : names) {
      const auto table = irx::explain_details(n, index, query, doc1, doc2);
      if (format == "json") {
        out += table.to_json().dump() + "\n";
      } else {
        if (!out.empty()) out += "\n";
        out += table.render_text();
      }
    }
  } else {
    json prefs = json::object();
    for (const auto& n : names)
      prefs[n] = irx::value(irx::axiom_preference(n, index, query, doc1, doc2));
    if (format == "json") {
      out = json{{"qid", query.qid},
                 {"query", query.text},
                 {"docids", {doc1, doc2}},
                 {"preferences", prefs}}
                .dump() +
            "\n";
    } else {
      for (const auto& n : names) {
        const int v = prefs[n].get<int>();
        out += n + " " + (v > 0 ? "+1" : (v < 0 ? "-1" : "0")) + "\n";
      }
    }
  }
  emit(c.out_path, out);
  return kOk;
}

int cmd_listwise(const Common& c, const std::vector<std::string>& extras,
                 const std::string& method, const std::string& run_path,
                 bool all, std::size_t depth, bool show_matrix,
                 const std::string& pair, const std::string& format) {
  if (run_path.empty() == c.model.empty())
    throw UsageError("listwise needs exactly one of --run or --model");
  json params = load_params(c, extras);
  irx::ListwiseParams lp;
  irx::apply_params(lp, params);
  lp.validate();

  const auto index = irx::PositionalIndex::load_file(c.index_path);
  std::vector<irx::Topic> topics;
  if (all) {
    if (c.topics_path.empty()) throw UsageError("--all requires --topics");
    topics = irx::read_topics(c.topics_path);
  } else {
    const auto q = resolve_query(index, c);
    topics.push_back({q.qid, q.text});
  }

  irx::RunFile runs;
  if (!run_path.empty()) {
    runs = irx::load_from_res(run_path);
  } else {
    const auto model = build_model(index, c, lp.ranker_params);
    for (const auto& t : topics) {
      const auto q = irx::Query::parse(index, t.qid, t.text);
      auto list = irx::rank(index, *model, q, std::nullopt, depth);
      if (!list.empty()) runs.put(std::move(list));
    }
  }

  const auto explainer = irx::make_listwise_explainer(method, index, lp);
  if (show_matrix) {
    const auto* coverage = dynamic_cast<const irx::PairCoverageExplainer*>(explainer.get());
    if (!coverage) throw UsageError("--show-matrix needs multiplex or intent_exs");
    std::string out;
    for (const auto& t : topics) {
      const auto matrix = coverage->matrix(runs.at(t.qid));
      std::optional<irx::PreferencePair> filter;
      if (!pair.empty()) {
        const auto parts = split_list(pair);
        if (parts.size() != 2) throw UsageError("--pair expects upper,lower");
        filter = irx::PreferencePair{parts[0], parts[1], 0};
      }
      if (format == "json") {
        json j = matrix.to_json();
        j["qid"] = t.qid;
        out += j.dump() + "\n";
      } else {
        out += "qid: " + t.qid + "\n" + irx::show_matrix(matrix, filter);
      }
    }
    emit(c.out_path, out);
    return kOk;
  }

  const auto batch = irx::explain_all(*explainer, index, topics, runs);
  std::string out;
  for (const auto& [qid, e] : batch.explanations) out += e.to_json().dump() + "\n";
  emit(c.out_path, out);
  for (const auto& [qid, msg] : batch.errors)
    std::cerr << "irx: qid " << qid << ": " << msg << "\n";
  if (batch.errors.empty()) return kOk;
  if (!all) throw irx::NotFound(batch.errors.begin()->second);
  return batch.explanations.empty() ? kNotFound : kOk;
}

int cmd_eval(const std::string& measure, double p, std::size_t k,
             const std::string& run_a, const std::string& run_b,
             const std::string& out_path) {
  const auto a = irx::load_from_res(run_a);
  const auto b = irx::load_from_res(run_b);
  json params = measure == "rbo" ? json{{"p", p}}
                                 : (measure == "jaccard" ? json{{"k", k}} : json::object());
  std::string out;
  double total = 0.0;
  std::size_t shared = 0;
  for (const auto& list : a.lists()) {
    const auto* other = b.find(list.qid);
    if (!other) continue;
    const auto ids_a = list.docids();
    const auto ids_b = other->docids();
    const auto r = irx::compare_lists(measure, ids_a, ids_b, p, k);
    out += json{{"qid", list.qid}, {"measure", measure}, {"value", r.value}, {"params", params}}
               .dump() +
           "\n";
    total += r.value;
    ++shared;
  }
  if (shared == 0) throw irx::NotFound("the two runs share no qids");
  out += json{{"qid", "all"},
              {"measure", measure},
              {"value", total / static_cast<double>(shared)},
              {"params", params},
              {"queries", shared}}
             .dump() +
         "\n";
  emit(out_path, out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"irx: explainable ranking toolkit"};
  app.require_subcommand(1);

  // index
  auto* index_cmd = app.add_subcommand("index", "Build an index from a JSONL corpus");
  std::string corpus, index_out;
  bool no_stem = false, keep_stopwords = false;
  index_cmd->add_option("--corpus", corpus, "Corpus JSONL")->required();
  index_cmd->add_option("--out,-o", index_out, "Index file")->required();
  index_cmd->add_flag("--no-stem", no_stem, "Disable Porter stemming");
  index_cmd->add_flag("--keep-stopwords", keep_stopwords, "Disable stopword removal");

  // rank
  Common rank_opts;
  std::size_t rank_depth = 100;
  std::string rank_tag = "irx";
  auto* rank_cmd = app.add_subcommand("rank", "Rank topics and write a TREC run");
  add_common(rank_cmd, rank_opts, false);
  rank_cmd->add_option("--depth", rank_depth, "Entries per query")->capture_default_str();
  rank_cmd->add_option("--tag", rank_tag, "Run tag")->capture_default_str();

  // explain
  auto* explain_cmd = app.add_subcommand("explain", "Explain a ranking");
  explain_cmd->require_subcommand(1);

  Common pw_opts;
  std::string pw_method = "lirme", pw_docid, pw_format = "json";
  auto* pw_cmd = explain_cmd->add_subcommand("pointwise", "Term weights for one document");
  add_common(pw_cmd, pw_opts, true);
  pw_cmd->add_option("--method", pw_method, "lirme or exs")
      ->capture_default_str()
      ->check(CLI::IsMember({"lirme", "exs"}));
  pw_cmd->add_option("--docid", pw_docid, "Document to explain")->required();
  pw_cmd->add_option("--format", pw_format, "json or text")
      ->capture_default_str()
      ->check(CLI::IsMember({"json", "text"}));

  Common pr_opts;
  std::string pr_axioms, pr_doc1, pr_doc2, pr_format = "text";
  bool pr_details = false;
  auto* pr_cmd = explain_cmd->add_subcommand("pairwise", "Axiom preferences for two documents");
  add_common(pr_cmd, pr_opts, true);
  pr_cmd->add_option("--axioms", pr_axioms, "Comma-separated axiom names")->required();
  pr_cmd->add_option("--doc1", pr_doc1, "First document")->required();
  pr_cmd->add_option("--doc2", pr_doc2, "Second document")->required();
  pr_cmd->add_flag("--details", pr_details, "Per-term details table");
  pr_cmd->add_option("--format", pr_format, "text or json")
      ->capture_default_str()
      ->check(CLI::IsMember({"json", "text"}));

  Common lw_opts;
  std::string lw_method = "greedy", lw_run, lw_pair, lw_format = "text";
  bool lw_all = false, lw_matrix = false;
  std::size_t lw_depth = 100;
  auto* lw_cmd = explain_cmd->add_subcommand("listwise", "Expansion terms for a ranked list");
  add_common(lw_cmd, lw_opts, true);
  lw_opts.model.clear();
  lw_cmd->add_option("--method", lw_method, "multiplex, intent_exs, greedy or bfs")
      ->capture_default_str()
      ->check(CLI::IsMember(irx::listwise_method_names()));
  lw_cmd->add_option("--run", lw_run, "TREC run with the lists to explain");
  lw_cmd->add_flag("--all", lw_all, "Explain every topic");
  lw_cmd->add_option("--depth", lw_depth, "List depth when ranking with --model")
      ->capture_default_str();
  lw_cmd->add_flag("--show-matrix", lw_matrix, "Print the preference matrix instead");
  lw_cmd->add_option("--pair", lw_pair, "Restrict the matrix view to upper,lower");
  lw_cmd->add_option("--format", lw_format, "Matrix view: text or json")
      ->capture_default_str()
      ->check(CLI::IsMember({"text", "json"}));

  // eval
  std::string eval_measure = "rbo", eval_out;
  double eval_p = 0.9;
  std::size_t eval_k = 10;
  std::vector<std::string> eval_runs;
  auto* eval_cmd = app.add_subcommand("eval", "Compare two runs query by query");
  eval_cmd->add_option("--measure", eval_measure, "rbo, tau, rho or jaccard")
      ->capture_default_str()
      ->check(CLI::IsMember({"rbo", "tau", "rho", "jaccard"}));
  eval_cmd->add_option("--p", eval_p, "RBO persistence")->capture_default_str();
  eval_cmd->add_option("--k", eval_k, "Jaccard depth")->capture_default_str();
  eval_cmd->add_option("--out,-o", eval_out, "Output file (default stdout)");
  eval_cmd->add_option("runs", eval_runs, "RUN_A RUN_B")->required()->expected(2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*index_cmd) return cmd_index(corpus, index_out, no_stem, keep_stopwords);
    if (*rank_cmd) return cmd_rank(rank_opts, rank_cmd->remaining(), rank_depth, rank_tag);
    if (*pw_cmd)
      return cmd_pointwise(pw_opts, pw_cmd->remaining(), pw_method, pw_docid, pw_format);
    if (*pr_cmd)
      return cmd_pairwise(pr_opts, pr_axioms, pr_doc1, pr_doc2, pr_details, pr_format);
    if (*lw_cmd)
      return cmd_listwise(lw_opts, lw_cmd->remaining(), lw_method, lw_run, lw_all,
                          lw_depth, lw_matrix, lw_pair, lw_format);
    if (*eval_cmd)
      return cmd_eval(eval_measure, eval_p, eval_k, eval_runs[0], eval_runs[1], eval_out);
  } catch (const UsageError& e) {
    std::cerr << "irx: " << e.what() << "\n";
    return kUsage;
  } catch (const irx::NotFound& e) {
    std::cerr << "irx: " << e.what() << "\n";
    return kNotFound;
  } catch (const irx::InvalidArgument& e) {
    std::cerr << "irx: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "irx: bad parameter value: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "irx: " << e.what() << "\n";
    return kIo;
  }
  return kUsage;
}
