#include "adgen/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "adgen/errors.hpp"
#include "adgen/parallel.hpp"
#include "adgen/rewards.hpp"
#include "adgen/text.hpp"

namespace adgen::pipeline {

namespace {

constexpr const char* kSlot = "{kw}";

std::string instantiate(const std::string& tmpl, const std::string& keyword) {
  std::string out = tmpl;
  std::size_t pos = 0;
  while ((pos = out.find(kSlot, pos)) != std::string::npos) {
    out.replace(pos, 4, keyword);
    pos += keyword.size();
  }
  return out;
}

// Per-record rng streams derived from one seed (splitmix64).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

const TemplateSet& TemplateSet::defaults() {
  static const TemplateSet set = [] {
    TemplateSet t;
    using style::StyleType;
    const auto add = [&](int index, std::string a, std::string b) {
      t.add(style::style_from_index(index), std::move(a));
      t.add(style::style_from_index(index), std::move(b));
    };
    // direct, with_emoji
    add(0, "{kw}到底值不值得入手？🔥", "今天要不要把{kw}带回家？✨");
    add(1, "{kw}也太好用了🔥", "全场最抢手的{kw}✨");
    add(2, "{kw}像开了挂一样🚀", "{kw}简直堪比私人管家💡");
    add(3, "{kw}上新了🔥", "{kw}使用体验分享✨");
    // direct, without_emoji
    add(4, "{kw}真的好用吗？", "选{kw}还是再等等？");
    add(5, "{kw}也太实用了", "全网最受欢迎的{kw}");
    add(6, "{kw}如同量身定制", "{kw}好比贴心搭子");
    add(7, "{kw}选购要点一次讲清", "{kw}日常使用心得");
    // indirect, with_emoji
    add(8, "据说{kw}快断货了，还抢得到吗？🔥", "听说{kw}又上热门了？✨");
    add(9, "据说这是全场最划算的{kw}🔥", "听说{kw}也太抢手了✨");
    add(10, "听说{kw}像开了挂一样✨", "据说{kw}堪比专柜同款🚀");
    add(11, "悄悄收藏了{kw}清单🔥", "原来{kw}还能这样用💡");
    // indirect, without_emoji
    add(12, "据说{kw}要调价了，是真的吗？", "听说{kw}口碑两极，到底怎么样？");
    add(13, "听说这是年度最受好评的{kw}", "据说{kw}火到无敌");
    add(14, "或许{kw}就像老朋友一样可靠", "据说{kw}宛如私人定制");
    add(15, "据说{kw}下周到货", "悄悄把{kw}加进了购物车");
    t.validate();
    return t;
  }();
  return set;
}

TemplateSet TemplateSet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open template file: " + path.string());
  TemplateSet t;
  int section = -1;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      try {
        section = style::style_index(
            style::parse_style(line.substr(1, line.size() - 2)));
      } catch (const ValidationError&) {
        throw ValidationError("template file line " + std::to_string(lineno) +
                              ": unknown style section " + line);
      }
      continue;
    }
    if (section < 0)
      throw ValidationError("template file line " + std::to_string(lineno) +
                            ": template before any style section");
    t.by_style_[static_cast<std::size_t>(section)].push_back(line);
  }
  t.validate();
  return t;
}

const std::vector<std::string>& TemplateSet::for_style(
    const style::StyleType& s) const {
  return by_style_[static_cast<std::size_t>(style::style_index(s))];
}

void TemplateSet::add(const style::StyleType& s, std::string tmpl) {
  by_style_[static_cast<std::size_t>(style::style_index(s))].push_back(
      std::move(tmpl));
}

void TemplateSet::validate() const {
  for (int i = 0; i < style::kStyleCount; ++i) {
    const auto& list = by_style_[static_cast<std::size_t>(i)];
    const std::string name = style::to_string(style::style_from_index(i));
    if (list.empty())
      throw ValidationError("template set: style " + name + " has no templates");
    for (const auto& tmpl : list) {
      if (tmpl.find(kSlot) == std::string::npos)
        throw ValidationError("template set: style " + name +
                              ": template lacks a {kw} slot: " + tmpl);
    }
  }
}

std::vector<std::string> default_stop_tokens() {
  return {"的", "了", "是", "在", "和", "与", "就",  "都",  "也", "很",
          "有", "这", "那", "个", "们", "要", "会",  "不",  "没", "到",
          "为", "而", "被", "把", "吗", "吧", "呢",  "啊",  "我", "你",
          "他", "她", "它", "上", "下", "中", "the", "a",   "an", "of",
          "to", "and", "for", "is", "are", "with", "in", "on"};
}

std::vector<std::string> load_stop_tokens(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stop-token file: " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    out.push_back(line);
  }
  return out;
}

KeywordProposer::KeywordProposer(std::vector<std::string> stop_tokens)
    : stop_(stop_tokens.begin(), stop_tokens.end()) {}

void KeywordProposer::add_corpus(const std::vector<corpus::AdRecord>& records) {
  for (const auto& r : records) {
    for (const auto& tok : text::tokenize(r.original_title)) ++frequency_[tok];
    for (const auto& tok : text::tokenize(r.content)) ++frequency_[tok];
  }
}

KeywordProposer::Proposal KeywordProposer::propose(const std::string& text,
                                                   int k) const {
  if (k < 1) throw std::invalid_argument("propose: k must be >= 1");
  if (text.empty())
    throw std::invalid_argument("propose: text must be non-empty");
  std::vector<std::string> eligible;
  {
    std::unordered_set<std::string> seen;
    for (const auto& tok : text::tokenize(text)) {
      if (stop_.count(tok)) continue;
      if (seen.insert(tok).second) eligible.push_back(tok);
    }
  }
  std::sort(eligible.begin(), eligible.end(),
            [&](const std::string& a, const std::string& b) {
              const auto fa = frequency_.find(a);
              const auto fb = frequency_.find(b);
              const long ca = fa == frequency_.end() ? 0 : fa->second;
              const long cb = fb == frequency_.end() ? 0 : fb->second;
              if (ca != cb) return ca < cb;  // rarer first
              return a < b;
            });
  Proposal p;
  p.shortfall = static_cast<long>(eligible.size()) < k;
  const std::size_t take = std::min<std::size_t>(eligible.size(),
                                                 static_cast<std::size_t>(k));
  p.keywords.assign(eligible.begin(), eligible.begin() + static_cast<long>(take));
  return p;
}

EnrichResult enrich(const std::vector<corpus::AdRecord>& records,
                    const KeywordProposer& proposer,
                    const style::StyleLexicon& lexicon) {
  EnrichResult result;
  for (const auto& r : records) {
    if (r.original_title.empty()) {
      ++result.skipped;
      continue;
    }
    const auto proposal = proposer.propose(r.original_title + " " + r.content, 1);
    if (proposal.keywords.empty()) {
      ++result.skipped;  // nothing but stop tokens
      continue;
    }
    corpus::Quadruple q;
    q.ad_id = r.id;
    q.content = r.content;
    q.keyword = proposal.keywords.front();
    q.style = style::classify_style(r.original_title, lexicon);
    q.headline = r.original_title;
    result.quadruples.push_back(std::move(q));
  }
  return result;
}

std::string generate_controlled(const GenerationRequest& request,
                                const TemplateSet& templates,
                                std::mt19937_64& rng) {
  if (request.keyword.empty())
    throw std::invalid_argument("generate_controlled: keyword must be non-empty");
  const auto& list = templates.for_style(request.style);
  if (list.empty())
    throw ValidationError("generate_controlled: no templates for style " +
                          style::to_string(request.style));
  const std::size_t idx = rng() % list.size();
  return instantiate(list[idx], request.keyword);
}

namespace {

bool contains_contiguous(const text::TokenSeq& haystack,
                         const text::TokenSeq& needle) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
    if (std::equal(needle.begin(), needle.end(), haystack.begin() + static_cast<long>(i)))
      return true;
  }
  return false;
}

}  // namespace

VerifierReport verify(const corpus::Quadruple& quadruple,
                      const style::StyleLexicon& lexicon) {
  VerifierReport report;
  if (quadruple.headline.empty()) return report;
  report.keyword_ok = contains_contiguous(text::tokenize(quadruple.headline),
                                          text::tokenize(quadruple.keyword));
  report.style_ok =
      style::classify_style(quadruple.headline, lexicon) == quadruple.style;
  report.passed = report.keyword_ok && report.style_ok;
  return report;
}

BuildResult build_sets(const std::vector<corpus::AdRecord>& records,
                       int k_keywords, const TemplateSet& templates,
                       const KeywordProposer& proposer,
                       const style::StyleLexicon& lexicon, std::uint64_t seed) {
  if (k_keywords < 1)
    throw std::invalid_argument("build_sets: k_keywords must be >= 1");
  const auto styles = style::all_styles();
  struct PerRecord {
    corpus::HeadlineSet set;
    std::vector<corpus::Quadruple> quadruples;
    int rejected = 0;
  };
  std::vector<PerRecord> partial(records.size());

  par::for_index(static_cast<long>(records.size()), 8, [&](long i) {
    const auto& r = records[static_cast<std::size_t>(i)];
    PerRecord& out = partial[static_cast<std::size_t>(i)];
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    out.set.ad_id = r.id;
    out.set.target_count = k_keywords;
    const auto proposal =
        proposer.propose(r.original_title + " " + r.content, k_keywords);
    for (const auto& keyword : proposal.keywords) {
      GenerationRequest request{r.content, keyword,
                                styles[rng() % styles.size()]};
      corpus::Quadruple q;
      q.ad_id = r.id;
      q.content = r.content;
      q.keyword = keyword;
      q.style = request.style;
      q.headline = generate_controlled(request, templates, rng);
      if (verify(q, lexicon).passed) {
        out.set.headlines.push_back(q.headline);
        out.quadruples.push_back(std::move(q));
      } else {
        ++out.rejected;
      }
    }
    out.set.raw_output = rewards::canonical_raw_output(out.set.headlines);
  });

  BuildResult result;
  result.sets.reserve(records.size());
  for (auto& p : partial) {
    result.sets.push_back(std::move(p.set));
    result.quadruples.insert(result.quadruples.end(),
                             std::make_move_iterator(p.quadruples.begin()),
                             std::make_move_iterator(p.quadruples.end()));
    result.rejected += p.rejected;
  }
  return result;
}

std::vector<SftExample> assemble_sft_dataset(
    const std::vector<corpus::HeadlineSet>& sets,
    const std::vector<corpus::AdRecord>& records) {
  if (sets.empty()) throw ValidationError("assemble_sft_dataset: no sets");
  std::unordered_map<std::string, const corpus::AdRecord*> by_id;
  for (const auto& r : records) by_id.emplace(r.id, &r);
  std::vector<SftExample> out;
  out.reserve(sets.size());
  for (const auto& s : sets) {
    const auto it = by_id.find(s.ad_id);
    if (it == by_id.end())
      throw ValidationError("assemble_sft_dataset: no record for ad_id " +
                            s.ad_id);
    SftExample ex;
    ex.input = "请为以下广告内容生成" + std::to_string(s.target_count) +
               "个风格各异的广告标题，并以JSON数组格式输出。\n广告内容：" +
               it->second->content;
    ex.output = rewards::canonical_raw_output(s.headlines);
    out.push_back(std::move(ex));
  }
  return out;
}

std::size_t write_sft_dataset(const std::vector<SftExample>& examples,
                              const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path.string());
  for (const auto& ex : examples) {
    nlohmann::ordered_json j = {{"input", ex.input}, {"output", ex.output}};
    out << j.dump() << '\n';
  }
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
  return examples.size();
}

}  // namespace adgen::pipeline
