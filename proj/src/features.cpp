#include "ssfgm/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <unordered_set>

#include "ssfgm/error.hpp"
#include "text_io.hpp"

namespace ssfgm {

using nlohmann::json;

RawUserRecord parse_raw_record(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedRow, e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::MalformedRow, "record is not an object");
  RawUserRecord r;
  const auto& id = j.contains("id") ? j.at("id") : json();
  if (id.is_string())
    r.id = id.get<std::string>();
  else if (id.is_number_integer())
    r.id = std::to_string(id.get<long long>());
  else
    throw Error(ErrorCode::MalformedRow, "record id must be a string or an integer");
  if (j.contains("profile")) {
    if (!j.at("profile").is_object()) throw Error(ErrorCode::MalformedRow, "profile must be an object");
    r.profile = j.at("profile");
  }
  if (j.contains("docs")) {
    const auto& docs = j.at("docs");
    if (!docs.is_array()) throw Error(ErrorCode::MalformedRow, "docs must be an array");
    for (const auto& doc : docs) {
      if (!doc.is_array()) throw Error(ErrorCode::MalformedRow, "each doc must be a token array");
      auto& tokens = r.docs.emplace_back();
      for (const auto& t : doc) {
        if (!t.is_string()) throw Error(ErrorCode::MalformedRow, "tokens must be strings");
        tokens.push_back(t.get<std::string>());
      }
    }
  }
  if (j.contains("label") && !j.at("label").is_null()) {
    if (!j.at("label").is_string()) throw Error(ErrorCode::MalformedRow, "label must be a string or null");
    r.label = j.at("label").get<std::string>();
    if (r.label->empty()) r.label.reset();
  }
  return r;
}

std::vector<RawUserRecord> load_raw_records(const std::filesystem::path& file) {
  auto in = detail::open_input(file);
  std::vector<RawUserRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::strip_cr(line);
    if (text.find_first_not_of(" \t") == std::string_view::npos) continue;
    try {
      out.push_back(parse_raw_record(text));
    } catch (const Error& e) {
      throw Error(e.code(), detail::where(file, line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<std::string> WhitespaceTokenizer::tokenize(std::string_view text) const {
  std::vector<std::string> out;
  std::string current;
  for (char ch : text) {
    const auto u = static_cast<unsigned char>(ch);
    if (u < 0x80 && (std::isspace(u) || std::ispunct(u))) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(u < 0x80 ? static_cast<char>(std::tolower(u)) : ch);
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

std::optional<std::size_t> MiTable::find(const std::string& token) const {
  const auto it = index.find(token);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

MiTable build_mi_table(std::span<const RawUserRecord> training,
                       std::span<const std::string> categories, std::size_t min_occurrence) {
  std::map<std::string, CategoryId> category_id;
  for (std::size_t k = 0; k < categories.size(); ++k)
    category_id.emplace(categories[k], static_cast<CategoryId>(k));
  const std::size_t c = categories.size();

  // token -> (occurrences, per-category user presence)
  std::map<std::string, std::pair<std::size_t, std::vector<std::size_t>>> counts;
  std::vector<std::size_t> users_per_category(c, 0);
  std::size_t users = 0;
  for (const auto& r : training) {
    if (!r.label) continue;
    const auto it = category_id.find(*r.label);
    if (it == category_id.end()) continue;
    const auto k = static_cast<std::size_t>(it->second);
    ++users;
    ++users_per_category[k];
    std::set<std::string_view> present;
    for (const auto& doc : r.docs)
      for (const auto& t : doc) {
        auto& entry = counts[t];
        if (entry.second.empty()) entry.second.assign(c, 0);
        ++entry.first;
        present.insert(t);
      }
    for (auto t : present) ++counts.find(std::string(t))->second.second[k];
  }
  if (users == 0) throw Error(ErrorCode::EmptyCorpus, "no labeled training users");

  MiTable table;
  table.categories = c;
  for (const auto& [token, entry] : counts)
    if (entry.first >= min_occurrence) table.tokens.push_back(token);
  table.mi = Matrix::Zero(static_cast<Eigen::Index>(table.tokens.size()), static_cast<Eigen::Index>(c));
  table.user_frequency.resize(table.tokens.size());

  const double total = static_cast<double>(users + 2 * c);
  for (std::size_t w = 0; w < table.tokens.size(); ++w) {
    const auto& presence = counts.at(table.tokens[w]).second;
    table.index.emplace(table.tokens[w], w);
    std::size_t with_token = 0;
    for (std::size_t n : presence) with_token += n;
    table.user_frequency[w] = with_token;
    const double p_w = (static_cast<double>(with_token) + static_cast<double>(c)) / total;
    for (std::size_t k = 0; k < c; ++k) {
      const double p_wc = (static_cast<double>(presence[k]) + 1.0) / total;
      const double p_c = (static_cast<double>(users_per_category[k]) + 2.0) / total;
      table.mi(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(k)) =
          std::max(0.0, p_wc * std::log(p_wc / (p_w * p_c)));
    }
  }
  return table;
}

std::vector<double> content_features(const RawUserRecord& user, const MiTable& table,
                                     MeanMode mean) {
  const std::size_t c = table.categories;
  std::vector<double> out(2 * c, 0.0);
  std::vector<std::size_t> rows;
  for (const auto& doc : user.docs)
    for (const auto& t : doc)
      if (auto w = table.find(t)) rows.push_back(*w);
  if (rows.empty()) return out;
  std::sort(rows.begin(), rows.end());
  std::vector<std::size_t> distinct = rows;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const auto& averaged = mean == MeanMode::DistinctTokens ? distinct : rows;

  for (std::size_t k = 0; k < c; ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    double best = 0.0;
    for (std::size_t w : distinct) best = std::max(best, table.mi(static_cast<Eigen::Index>(w), col));
    double sum = 0.0;
    for (std::size_t w : averaged) sum += table.mi(static_cast<Eigen::Index>(w), col);
    out[2 * k] = best;
    out[2 * k + 1] = sum / static_cast<double>(averaged.size());
  }
  return out;
}

std::size_t ProfileSchema::width() const {
  std::size_t w = 0;
  for (const auto& f : fields)
    w += f.kind == ProfileField::Kind::Categorical ? f.vocabulary.size() + 1 : 1;
  return w;
}

namespace {

std::optional<std::string> categorical_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return std::nullopt;
}

}  // namespace

ProfileSchema infer_profile_schema(std::span<const RawUserRecord> training) {
  std::map<std::string, std::pair<bool, bool>> kinds;  // name -> (all numeric, all categorical)
  std::map<std::string, std::set<std::string>> vocab;
  for (const auto& r : training) {
    for (const auto& [name, value] : r.profile.items()) {
      auto& [numeric, categorical] = kinds.try_emplace(name, true, true).first->second;
      numeric = numeric && value.is_number();
      const auto cat = categorical_value(value);
      categorical = categorical && cat.has_value();
      if (cat) vocab[name].insert(*cat);
    }
  }
  ProfileSchema schema;
  for (const auto& [name, kind] : kinds) {
    ProfileField f;
    f.name = name;
    if (kind.first) {
      f.kind = ProfileField::Kind::Numeric;
    } else if (kind.second) {
      f.kind = ProfileField::Kind::Categorical;
      const auto& v = vocab[name];
      f.vocabulary.assign(v.begin(), v.end());
    } else {
      throw Error(ErrorCode::SchemaMismatch, "profile field '" + name + "' mixes value types");
    }
    schema.fields.push_back(std::move(f));
  }
  return schema;
}

std::vector<double> encode_profile(const RawUserRecord& user, const ProfileSchema& schema) {
  std::vector<double> out;
  out.reserve(schema.width());
  for (const auto& f : schema.fields) {
    if (!user.profile.contains(f.name))
      throw Error(ErrorCode::SchemaMismatch, "user " + user.id + " lacks profile field '" + f.name + "'");
    const auto& value = user.profile.at(f.name);
    if (f.kind == ProfileField::Kind::Numeric) {
      if (!value.is_number())
        throw Error(ErrorCode::SchemaMismatch, "field '" + f.name + "' of user " + user.id + " is not numeric");
      const double v = value.get<double>();
      if (!std::isfinite(v))
        throw Error(ErrorCode::NonFiniteFeature, "field '" + f.name + "' of user " + user.id);
      out.push_back(std::copysign(std::log1p(std::abs(v)), v));
    } else {
      const auto cat = categorical_value(value);
      if (!cat)
        throw Error(ErrorCode::SchemaMismatch, "field '" + f.name + "' of user " + user.id + " is not categorical");
      const auto it = std::lower_bound(f.vocabulary.begin(), f.vocabulary.end(), *cat);
      const bool known = it != f.vocabulary.end() && *it == *cat;
      const auto slot = known ? static_cast<std::size_t>(it - f.vocabulary.begin()) : f.vocabulary.size();
      for (std::size_t i = 0; i <= f.vocabulary.size(); ++i) out.push_back(i == slot ? 1.0 : 0.0);
    }
  }
  return out;
}

void to_json(json& j, const ProfileSchema& schema) {
  j = json::array();
  for (const auto& f : schema.fields) {
    json field{{"name", f.name},
               {"kind", f.kind == ProfileField::Kind::Numeric ? "numeric" : "categorical"}};
    if (f.kind == ProfileField::Kind::Categorical) field["vocabulary"] = f.vocabulary;
    j.push_back(std::move(field));
  }
}

void from_json(const json& j, ProfileSchema& schema) {
  schema.fields.clear();
  for (const auto& field : j) {
    ProfileField f;
    f.name = field.at("name").get<std::string>();
    const auto kind = field.at("kind").get<std::string>();
    if (kind == "numeric") {
      f.kind = ProfileField::Kind::Numeric;
    } else if (kind == "categorical") {
      f.kind = ProfileField::Kind::Categorical;
      f.vocabulary = field.at("vocabulary").get<std::vector<std::string>>();
      std::sort(f.vocabulary.begin(), f.vocabulary.end());
    } else {
      throw Error(ErrorCode::SchemaMismatch, "unknown field kind '" + kind + "'");
    }
    schema.fields.push_back(std::move(f));
  }
}

std::vector<NamedEdge> load_named_edges(const std::filesystem::path& file) {
  auto in = detail::open_input(file);
  std::vector<NamedEdge> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::strip_cr(line);
    if (text.empty()) continue;
    const auto fields = detail::split_tabs(text);
    if (line_no == 1 && fields.size() >= 2 && fields[0] == "src" && fields[1] == "dst") continue;
    if (fields.size() != 3 || (fields[2] != "D" && fields[2] != "U"))
      throw Error(ErrorCode::MalformedRow, detail::where(file, line_no) + ": expected src<TAB>dst<TAB>D|U");
    out.push_back({std::string(fields[0]), std::string(fields[1]),
                   fields[2] == "D" ? EdgeKind::Directed : EdgeKind::Undirected});
  }
  return out;
}

FeaturizedData featurize(std::span<const RawUserRecord> records, std::span<const NamedEdge> edges,
                         const FeaturizeOptions& options) {
  std::vector<const RawUserRecord*> kept;
  std::map<std::string, NodeId> ids;
  for (const auto& r : records) {
    if (r.docs.size() < options.min_docs) continue;
    if (!ids.emplace(r.id, static_cast<NodeId>(kept.size())).second)
      throw Error(ErrorCode::DuplicateNode, "user " + r.id);
    kept.push_back(&r);
  }
  std::set<std::string> seen_users;
  for (const auto& r : records) seen_users.insert(r.id);

  std::vector<Edge> graph_edges;
  for (const auto& e : edges) {
    if (!seen_users.count(e.src) || !seen_users.count(e.dst))
      throw Error(ErrorCode::UnknownNodeInEdge, e.src + " " + e.dst);
    const auto a = ids.find(e.src);
    const auto b = ids.find(e.dst);
    if (a == ids.end() || b == ids.end()) continue;
    graph_edges.push_back({a->second, b->second, e.kind});
  }

  std::set<std::string> label_names;
  for (const auto* r : kept)
    if (r->label) label_names.insert(*r->label);
  std::vector<std::string> categories(label_names.begin(), label_names.end());
  std::vector<std::string> names;
  std::vector<CategoryId> labels;
  for (const auto* r : kept) {
    names.push_back(r->id);
    labels.push_back(r->label ? static_cast<CategoryId>(std::lower_bound(categories.begin(), categories.end(), *r->label) - categories.begin())
                              : kUnlabeled);
  }

  // Label bookkeeping on a featureless graph first, so vocabularies can be
  // restricted to the training users.
  const auto n = static_cast<Eigen::Index>(kept.size());
  Network skeleton = filter_rare_categories(
      Network(names, Matrix(n, 0), graph_edges, labels, categories), options.min_category_count);
  DatasetSplit split = split_labels(skeleton, options.fractions, options.seed);

  std::vector<RawUserRecord> training;
  training.reserve(split.train.size());
  for (NodeId v : split.train) {
    training.push_back(*kept[v]);
    training.back().label = skeleton.category_names()[static_cast<std::size_t>(skeleton.label(v))];
  }
  MiTable table = build_mi_table(training, skeleton.category_names(), options.min_occurrence);
  ProfileSchema schema = options.schema ? *options.schema : infer_profile_schema(training);

  const std::size_t width = schema.width() + 2 * table.categories;
  Matrix features(n, static_cast<Eigen::Index>(width));
  for (Eigen::Index v = 0; v < n; ++v) {
    const auto& r = *kept[static_cast<std::size_t>(v)];
    auto row = encode_profile(r, schema);
    const auto content = content_features(r, table, options.mean);
    row.insert(row.end(), content.begin(), content.end());
    for (std::size_t j = 0; j < width; ++j) features(v, static_cast<Eigen::Index>(j)) = row[j];
  }
  Network network(skeleton.node_names(), std::move(features), skeleton.edges(), skeleton.labels(),
                  skeleton.category_names());
  return {std::move(network), std::move(schema), std::move(table), std::move(split)};
}

}  // namespace ssfgm
