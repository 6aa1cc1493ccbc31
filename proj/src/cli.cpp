#include "latalign/cli.h"

#include <glob.h>

#include <atomic>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "latalign/errors.h"
#include "latalign/io.h"
#include "latalign/lattice.h"

namespace latalign {
namespace {

std::string CountText(const Rational &value) {
  if (value.denominator() == 1) return std::to_string(value.numerator());
  return std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
}

TransformRuleSet LoadRules(const std::optional<std::filesystem::path> &syn_path) {
  if (!syn_path) return {};
  return ParseSynonyms(ReadFile(*syn_path), syn_path->string());
}

HypFormat ResolveFormat(HypFormat requested, const std::filesystem::path &path) {
  if (requested != HypFormat::kAuto) return requested;
  return path.extension() == ".ctm" ? HypFormat::kCtm : HypFormat::kText;
}

std::filesystem::path Resolve(const std::filesystem::path &base, const std::string &path) {
  std::filesystem::path p(path);
  return p.is_absolute() ? p : base / p;
}

/// Maps the exception currently being handled to an exit code.
int ReportError(std::ostream &err) {
  try {
    throw;
  } catch (const IoError &e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

std::vector<std::filesystem::path> Glob(const std::string &pattern) {
  glob_t matches{};
  std::vector<std::filesystem::path> out;
  if (::glob(pattern.c_str(), 0, nullptr, &matches) == 0) {
    for (std::size_t i = 0; i < matches.gl_pathc; ++i) out.emplace_back(matches.gl_pathv[i]);
  }
  ::globfree(&matches);
  return out;
}

std::string FileIdFromPath(const std::filesystem::path &path) {
  auto name = path.filename().string();
  auto dot = name.find('.');
  return dot == std::string::npos ? name : name.substr(0, dot);
}

}  // namespace

std::optional<std::filesystem::path> SidecarFor(const std::optional<std::filesystem::path> &norm_dir,
                                                const std::string &file_id) {
  if (!norm_dir) return std::nullopt;
  auto candidate = *norm_dir / (file_id + ".norm.json");
  std::error_code ec;
  if (std::filesystem::exists(candidate, ec)) return candidate;
  return std::nullopt;
}

ScoredFile ScoreFile(const std::filesystem::path &ref_path, const std::filesystem::path &hyp_path,
                     HypFormat hyp_format, const TransformRuleSet &rules,
                     const std::optional<std::filesystem::path> &norm_path, const std::string &file_id) {
  ScoredFile scored;
  scored.doc = ParseNlp(ReadFile(ref_path), file_id, ref_path.string());
  if (norm_path) {
    scored.doc = AttachNormSidecar(std::move(scored.doc), ReadFile(*norm_path), norm_path->string());
  } else {
    for (const auto &token : scored.doc.tokens)
      if (token.norm_id)
        throw DataError(ref_path.string() + ": token '" + token.text + "' references norm_id '" + *token.norm_id +
                        "' but no normalization sidecar was supplied");
  }

  const auto hyp_text = ReadFile(hyp_path);
  const auto hyp = ResolveFormat(hyp_format, hyp_path) == HypFormat::kCtm
                       ? ParseCtm(hyp_text, hyp_path.string())
                       : ParseHypothesisText(hyp_text, hyp_path.string());

  const auto lattice = BuildLattice(scored.doc, rules);
  scored.alignment = Align(lattice, hyp);
  scored.result.file_id = file_id;
  scored.result.summary = Summarize(scored.alignment);
  scored.result.entities = ComputeEntityBreakdown(scored.alignment, scored.doc);
  scored.result.metadata.file_id = file_id;
  scored.result.metadata.ref_path = ref_path.string();
  scored.result.metadata.hyp_path = hyp_path.string();
  return scored;
}

std::string SummaryLine(const WerSummary &summary) {
  auto wer = summary.Wer();
  return "WER: " + (wer ? FormatPercent(*wer) + "%" : std::string("undefined")) +
         " (S=" + CountText(summary.substitutions) + " D=" + CountText(summary.deletions) +
         " I=" + CountText(summary.insertions) + " N=" + CountText(summary.ref_count) + ")";
}

int CmdScore(const RunConfig &config, std::ostream &out, std::ostream &err) {
  try {
    const auto rules = LoadRules(config.syn_path);
    const auto file_id = FileIdFromPath(config.ref_path);
    const auto scored = ScoreFile(config.ref_path, config.hyp_path, config.hyp_format, rules, config.norm_path, file_id);

    if (config.sbs_path) WriteFileAtomic(*config.sbs_path, RenderSideBySide(scored.alignment, &scored.doc));
    if (config.json_path) {
      nlohmann::json doc = {{"file_id", scored.result.file_id},
                            {"summary", SummaryJson(scored.result.summary)},
                            {"entities", BreakdownJson(scored.result.entities)}};
      WriteFileAtomic(*config.json_path, doc.dump(2) + "\n");
    }
    out << SummaryLine(scored.result.summary) << "\n";
    return kExitOk;
  } catch (...) {
    return ReportError(err);
  }
}

int CmdBatch(const RunConfig &config, std::ostream &out, std::ostream &err) {
  CorpusManifest manifest;
  TransformRuleSet rules;
  try {
    manifest = ParseManifest(ReadFile(config.manifest_path), config.manifest_path.string());
    rules = LoadRules(config.syn_path);
  } catch (...) {
    return ReportError(err);
  }
  const auto base = config.manifest_path.parent_path();
  const std::set<std::string> excluded(config.exclude_ids.begin(), config.exclude_ids.end());

  std::vector<std::size_t> work;
  for (std::size_t i = 0; i < manifest.rows.size(); ++i)
    if (!excluded.contains(manifest.rows[i].file_id)) work.push_back(i);

  std::vector<std::optional<FileResult>> results(manifest.rows.size());
  std::vector<std::string> failures(manifest.rows.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t w = next++; w < work.size(); w = next++) {
      const auto &row = manifest.rows[work[w]];
      try {
        auto scored = ScoreFile(Resolve(base, row.ref_path), Resolve(base, row.hyp_path), HypFormat::kAuto, rules,
                                SidecarFor(config.norm_dir, row.file_id), row.file_id);
        scored.result.metadata = row;
        results[work[w]] = std::move(scored.result);
      } catch (const std::exception &e) {
        failures[work[w]] = row.file_id + ": " + e.what();
      }
    }
  };
  {
    const unsigned jobs = std::max(1u, std::min<unsigned>(config.parallelism, static_cast<unsigned>(work.size())));
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
  }

  try {
    ReportBuilder builder(AggregateOptions{config.exclude_ids});
    std::vector<std::string> failed;
    for (std::size_t i = 0; i < manifest.rows.size(); ++i) {
      if (results[i]) builder.Add(std::move(*results[i]));
      if (!failures[i].empty()) failed.push_back(failures[i]);
    }
    auto report = builder.Build();
    report.incomplete = !failed.empty();
    report.failures = failed;

    if (config.json_path) WriteFileAtomic(*config.json_path, RenderJson(report));
    if (config.csv_path) WriteFileAtomic(*config.csv_path, RenderCsv(report).Combined());
    for (const auto &f : failed) err << "error: " << f << "\n";
    out << SummaryLine(report.overall) << "\n";
    return failed.empty() ? kExitOk : kExitData;
  } catch (...) {
    return ReportError(err);
  }
}

int CmdStats(const RunConfig &config, std::ostream &out, std::ostream &err) {
  try {
    const auto paths = Glob(config.refs_glob);
    if (paths.empty()) {
      err << "error: no reference files match '" << config.refs_glob << "'\n";
      return kExitIo;
    }
    const auto rules = LoadRules(config.syn_path);
    std::vector<ReferenceDocument> docs;
    for (const auto &path : paths) {
      const auto file_id = FileIdFromPath(path);
      auto doc = ParseNlp(ReadFile(path), file_id, path.string());
      if (auto sidecar = SidecarFor(config.norm_dir, file_id))
        doc = AttachNormSidecar(std::move(doc), ReadFile(*sidecar), sidecar->string());
      docs.push_back(std::move(doc));
    }

    const auto coverage = TransformCoverageStats(docs, rules);
    const auto total = static_cast<std::int64_t>(coverage.tokens_total);
    auto pct = [total](std::size_t count) {
      return total == 0 ? std::string("0.0") : FormatPercent(Rational(static_cast<std::int64_t>(count), total));
    };
    std::string text = "# coverage\nmetric,value\n";
    text += "files," + std::to_string(docs.size()) + "\n";
    text += "tokens_total," + std::to_string(coverage.tokens_total) + "\n";
    text += "tokens_with_norm_candidates," + std::to_string(coverage.tokens_with_norm_candidates) + "\n";
    text += "tokens_covered_by_synonym_match," + std::to_string(coverage.tokens_covered_by_synonym_match) + "\n";
    text += "fraction_norm," + pct(coverage.tokens_with_norm_candidates) + "%\n";
    text += "fraction_syn," + pct(coverage.tokens_covered_by_synonym_match) + "%\n";
    text += "\n# entities\n" + RenderHistogramCsv(EntityDistribution(docs));
    WriteFileAtomic(config.out_path, text);

    out << "tokens: " << coverage.tokens_total << " norm: " << pct(coverage.tokens_with_norm_candidates)
        << "% synonym: " << pct(coverage.tokens_covered_by_synonym_match) << "%\n";
    return kExitOk;
  } catch (...) {
    return ReportError(err);
  }
}

int RunCli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Lattice-based WER scoring with synonym and normalization alternatives", "latalign"};
  app.require_subcommand(1);

  RunConfig config;
  std::string ref, hyp, syn, norm, sbs, json, hyp_format, manifest, norm_dir, csv, out_path;

  auto *score = app.add_subcommand("score", "Score one hypothesis against one .nlp reference");
  score->add_option("--ref", ref, "Reference .nlp file")->required();
  score->add_option("--hyp", hyp, "Hypothesis (.txt or .ctm)")->required();
  score->add_option("--syn", syn, "Synonym rules (lhs|rhs per line)");
  score->add_option("--norm", norm, "Normalization sidecar JSON");
  score->add_option("--sbs", sbs, "Write a side-by-side alignment");
  score->add_option("--json", json, "Write per-file JSON");
  score->add_option("--hyp-format", hyp_format, "Override hypothesis format")->check(CLI::IsMember({"txt", "ctm"}));

  auto *batch = app.add_subcommand("batch", "Score every manifest row and write a stratified report");
  batch->add_option("--manifest", manifest, "Corpus manifest CSV")->required();
  batch->add_option("--syn", syn, "Synonym rules");
  batch->add_option("--norm-dir", norm_dir, "Directory of <file_id>.norm.json sidecars");
  batch->add_option("--json", json, "JSON report path")->required();
  batch->add_option("--csv", csv, "CSV tables path");
  batch->add_option("--exclude", config.exclude_ids, "Comma-separated file ids to leave out")->delimiter(',');
  batch->add_option("--jobs", config.parallelism, "Files scored concurrently")->check(CLI::PositiveNumber);

  auto *stats = app.add_subcommand("stats", "Coverage statistics and entity distribution");
  stats->add_option("--refs", config.refs_glob, "Glob of .nlp references")->required();
  stats->add_option("--syn", syn, "Synonym rules");
  stats->add_option("--norm-dir", norm_dir, "Directory of <file_id>.norm.json sidecars");
  stats->add_option("--out", out_path, "Output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitData;
  }

  auto optional_path = [](const std::string &s) {
    return s.empty() ? std::nullopt : std::optional<std::filesystem::path>(s);
  };
  config.syn_path = optional_path(syn);
  config.norm_dir = optional_path(norm_dir);
  config.json_path = optional_path(json);

  if (*score) {
    config.mode = Mode::kScore;
    config.ref_path = ref;
    config.hyp_path = hyp;
    config.norm_path = optional_path(norm);
    config.sbs_path = optional_path(sbs);
    config.hyp_format = hyp_format == "txt" ? HypFormat::kText : hyp_format == "ctm" ? HypFormat::kCtm : HypFormat::kAuto;
    return CmdScore(config, out, err);
  }
  if (*batch) {
    config.mode = Mode::kBatch;
    config.manifest_path = manifest;
    config.csv_path = optional_path(csv);
    return CmdBatch(config, out, err);
  }
  config.mode = Mode::kStats;
  config.out_path = out_path;
  return CmdStats(config, out, err);
}

}  // namespace latalign
