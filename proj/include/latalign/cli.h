#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "latalign/aligner.h"
#include "latalign/nlp_format.h"
#include "latalign/report.h"
#include "latalign/transforms.h"

namespace latalign {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitData = 2;

enum class Mode { kScore, kBatch, kStats };
enum class HypFormat { kAuto, kText, kCtm };

struct RunConfig {
  Mode mode = Mode::kScore;
  // score
  std::filesystem::path ref_path;
  std::filesystem::path hyp_path;
  std::optional<std::filesystem::path> norm_path;
  std::optional<std::filesystem::path> sbs_path;
  HypFormat hyp_format = HypFormat::kAuto;
  // batch
  std::filesystem::path manifest_path;
  std::optional<std::filesystem::path> csv_path;
  std::vector<std::string> exclude_ids;
  unsigned parallelism = 1;
  // stats
  std::string refs_glob;
  std::filesystem::path out_path;
  // shared
  std::optional<std::filesystem::path> syn_path;
  std::optional<std::filesystem::path> norm_dir;
  std::optional<std::filesystem::path> json_path;
};

/// Everything produced while scoring one reference/hypothesis pair.
struct ScoredFile {
  ReferenceDocument doc;
  Alignment alignment;
  FileResult result;
};

/// Parse, build the lattice, align, summarize. Throws IoError / DataError.
ScoredFile ScoreFile(const std::filesystem::path &ref_path, const std::filesystem::path &hyp_path,
                     HypFormat hyp_format, const TransformRuleSet &rules,
                     const std::optional<std::filesystem::path> &norm_path, const std::string &file_id);

/// `<norm_dir>/<file_id>.norm.json` when it exists.
std::optional<std::filesystem::path> SidecarFor(const std::optional<std::filesystem::path> &norm_dir,
                                                const std::string &file_id);

/// `WER: 11.3% (S=.. D=.. I=.. N=..)`
std::string SummaryLine(const WerSummary &summary);

int CmdScore(const RunConfig &config, std::ostream &out, std::ostream &err);
int CmdBatch(const RunConfig &config, std::ostream &out, std::ostream &err);
int CmdStats(const RunConfig &config, std::ostream &out, std::ostream &err);

/// Parses argv (`score`, `batch`, `stats` subcommands) and dispatches.
int RunCli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace latalign
