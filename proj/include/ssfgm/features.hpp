#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssfgm/network.hpp"

namespace ssfgm {

/// One user of the raw corpus: profile fields, tokenized posts and an
/// optional location label.
struct RawUserRecord {
  std::string id;
  nlohmann::json profile = nlohmann::json::object();
  std::vector<std::vector<std::string>> docs;
  std::optional<std::string> label;
};

/// Parses one JSON-lines row `{"id":..., "profile":{...}, "docs":[[...]], "label":...|null}`.
RawUserRecord parse_raw_record(std::string_view line);
std::vector<RawUserRecord> load_raw_records(const std::filesystem::path& file);

/// Splits on whitespace and ASCII punctuation and lowercases ASCII letters.
/// Bytes outside ASCII are kept inside tokens.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::vector<std::string> tokenize(std::string_view text) const = 0;
};

class WhitespaceTokenizer final : public Tokenizer {
 public:
  std::vector<std::string> tokenize(std::string_view text) const override;
};

/// Per-token, per-category mutual information built from labeled users.
struct MiTable {
  std::vector<std::string> tokens;                    // sorted
  std::unordered_map<std::string, std::size_t> index;  // token -> row
  Matrix mi;                                          // |tokens| x C, entries >= 0
  std::vector<std::size_t> user_frequency;            // users containing each token
  std::size_t categories = 0;

  std::optional<std::size_t> find(const std::string& token) const;
};

/// MI(w,c) = P(w,c) log[P(w,c) / (P(w) P(c))] over user-level presence with
/// add-one smoothing of the 2 x C presence table, clamped at 0. Tokens with
/// fewer than `min_occurrence` total occurrences are dropped. Only
/// `training` records with a label in `categories` contribute.
MiTable build_mi_table(std::span<const RawUserRecord> training,
                       std::span<const std::string> categories, std::size_t min_occurrence = 5);

enum class MeanMode { DistinctTokens, Occurrences };

/// 2C values: [2c] = max over the user's known tokens of MI(w,c), [2c+1] =
/// the mean. All zero when no token is known.
std::vector<double> content_features(const RawUserRecord& user, const MiTable& table,
                                     MeanMode mean = MeanMode::DistinctTokens);

struct ProfileField {
  enum class Kind { Categorical, Numeric };
  std::string name;
  Kind kind = Kind::Numeric;
  /// Categorical values seen in training, sorted; one extra OTHER slot follows.
  std::vector<std::string> vocabulary;

  friend bool operator==(const ProfileField&, const ProfileField&) = default;
};

struct ProfileSchema {
  std::vector<ProfileField> fields;

  std::size_t width() const;
  friend bool operator==(const ProfileSchema&, const ProfileSchema&) = default;
};

/// Fields in sorted name order; numeric when every training value is a
/// number, categorical when every value is a string or boolean.
ProfileSchema infer_profile_schema(std::span<const RawUserRecord> training);

/// Fixed-width encoding in schema order: one-hot plus OTHER for categorical
/// fields, sign(v) log1p(|v|) for numeric ones. Throws SchemaMismatch on a
/// missing field or a value of the wrong type.
std::vector<double> encode_profile(const RawUserRecord& user, const ProfileSchema& schema);

void to_json(nlohmann::json& j, const ProfileSchema& schema);
void from_json(const nlohmann::json& j, ProfileSchema& schema);

struct FeaturizeOptions {
  std::size_t min_docs = 10;
  std::size_t min_category_count = 10;
  std::size_t min_occurrence = 5;
  SplitFractions fractions{};
  std::uint64_t seed = 1;
  MeanMode mean = MeanMode::DistinctTokens;
  /// Use this schema instead of inferring one from the training users.
  std::optional<ProfileSchema> schema;
};

struct NamedEdge {
  std::string src;
  std::string dst;
  EdgeKind kind = EdgeKind::Undirected;
};

std::vector<NamedEdge> load_named_edges(const std::filesystem::path& file);

struct FeaturizedData {
  Network network;
  ProfileSchema schema;
  MiTable table;
  DatasetSplit split;
};

/// Drops users with fewer than min_docs posts (and their edges), filters
/// rare categories, splits the labels, then builds the vocabulary, the MI
/// table and the schema from the training users only. Features are the
/// profile encoding followed by the content features. Re-running
/// filter_rare_categories and split_labels with the same seed on the
/// resulting network reproduces `split`.
FeaturizedData featurize(std::span<const RawUserRecord> records, std::span<const NamedEdge> edges,
                         const FeaturizeOptions& options);

}  // namespace ssfgm
