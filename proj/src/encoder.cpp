#include "bd/encoder.hpp"

#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "bd/pubtator.hpp"

namespace bd {

using nlohmann::json;

EncodedExample encode(const LabeledMention& mention, const ContextWindows& windows,
                      const FeatureBundle& bundle, const Vocab& vocab, std::size_t l_ctx,
                      std::size_t l_feat) {
  EncodedExample ex;
  ex.label = class_index(mention.gold_type);

  // before: keep the last l_ctx tokens, left-pad to l_ctx.
  ex.before_ids.assign(l_ctx, Vocab::kPadId);
  {
    const auto& toks = windows.before;
    const std::size_t keep = std::min(l_ctx, toks.size());
    for (std::size_t i = 0; i < keep; ++i)
      ex.before_ids[l_ctx - keep + i] = vocab.word_id(toks[toks.size() - keep + i]);
  }

  // after: keep the first l_ctx tokens, right-pad to l_ctx.
  ex.after_ids.assign(l_ctx, Vocab::kPadId);
  {
    const auto& toks = windows.after;
    const std::size_t keep = std::min(l_ctx, toks.size());
    for (std::size_t i = 0; i < keep; ++i) ex.after_ids[i] = vocab.word_id(toks[i]);
  }

  ex.feature_ids.assign(l_feat, Vocab::kPadId);
  {
    const auto feats = bundle.all();
    const std::size_t keep = std::min(l_feat, feats.size());
    for (std::size_t i = 0; i < keep; ++i) ex.feature_ids[i] = vocab.feature_id(feats[i]);
  }
  return ex;
}

void write_encoded_cache(std::ostream& out, const std::vector<EncodedExample>& examples) {
  for (const auto& ex : examples) {
    json line = {
        {"before_ids", ex.before_ids},
        {"after_ids", ex.after_ids},
        {"feature_ids", ex.feature_ids},
        {"label", ex.label},
    };
    out << line.dump() << "\n";
  }
}

std::vector<EncodedExample> read_encoded_cache(std::istream& in) {
  std::vector<EncodedExample> examples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object())
      throw ParseError("line " + std::to_string(line_no) + ": not a JSON object");
    try {
      EncodedExample ex;
      ex.before_ids = j.at("before_ids").get<std::vector<std::uint32_t>>();
      ex.after_ids = j.at("after_ids").get<std::vector<std::uint32_t>>();
      ex.feature_ids = j.at("feature_ids").get<std::vector<std::uint32_t>>();
      ex.label = j.at("label").get<int>();
      examples.push_back(std::move(ex));
    } catch (const json::exception& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return examples;
}

}  // namespace bd
