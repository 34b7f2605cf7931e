/* Copyright 2026 The sarcgen Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "sarc/corpus/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string_view>

#include "sarc/common/error.hpp"
#include "sarc/common/rng.hpp"

namespace sarc::corpus {

namespace {

using Words = std::vector<std::string_view>;

const Words kNouns = {"电影", "设计", "服务", "外卖", "手机", "地铁", "会议", "节目",
                      "餐厅", "快递", "政策", "比赛", "咖啡", "客服", "导演", "演员"};
const Words kPeople = {"老板", "男朋友", "女朋友", "同事", "领导", "专家"};
const Words kPraise = {"值", "厉害", "精彩", "贴心", "准时", "专业", "优秀", "高效", "聪明"};
const Words kPlain = {"好看", "方便", "便宜", "舒服", "热情", "划算", "不错"};
const Words kShort = {"两个小时", "三分钟", "半年"};
const Words kLong = {"五个小时", "一整天", "半年"};
const Words kThanks = {"感谢", "佩服", "学到"};

// {n} noun, {p} person, {a} praise, {b} plain adjective, {s}/{l} short/long
// duration, {t} gratitude verb.
const Words kSarcastic = {
    "这{n}真{a}了，{s}的{n}感觉看了{l}",
    "你是真的懂{n}，{p}终于{a}了一次",
    "{t}{n}，让我等了{l}还是没等到",
    "{n}简直太{a}了，{s}就能坏掉",
    "不愧是{p}，{n}做得真{a}，佩服佩服",
    "好{a}的{n}啊，居然等了{l}",
    "{p}真是天才，{n}{a}到让人失望",
};
const Words kSincere = {
    "今天的{n}很{b}，推荐大家",
    "{n}{b}，我很满意",
    "和{p}一起体验了{n}，很开心",
    "这家{n}的服务不错，{s}就好了",
    "{p}推荐的{n}确实{b}",
    "{n}比想象中{b}，期待下次",
    "谢谢{p}，{n}很{b}",
};
const Words kContexts = {"大家觉得这部电影怎么样？", "新规定今天开始实施",
                         "晒一下今天的外卖", "公司年会节目单出炉", "周末地铁延误通知"};

std::string fill(std::string_view tmpl, Rng& rng) {
  auto pick = [&](const Words& w) { return std::string(w[rng.below(w.size())]); };
  std::string out;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] == '{' && i + 2 < tmpl.size() && tmpl[i + 2] == '}') {
      switch (tmpl[i + 1]) {
        case 'n': out += pick(kNouns); break;
        case 'p': out += pick(kPeople); break;
        case 'a': out += pick(kPraise); break;
        case 'b': out += pick(kPlain); break;
        case 's': out += pick(kShort); break;
        case 'l': out += pick(kLong); break;
        case 't': out += pick(kThanks); break;
        default: throw state_error("unknown template slot");
      }
      i += 2;
    } else {
      out += tmpl[i];
    }
  }
  return out;
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

UserBehavior make_behavior(Label label, Topic topic, Hierarchy hierarchy,
                           const SyntheticOptions& opt, Rng& rng) {
  UserBehavior b;
  b.comment_count = static_cast<std::uint64_t>(std::llround(std::exp(3.5 + 1.1 * rng.normal())));
  double total = 0.0;
  for (std::size_t t = 0; t < kTopicCount; ++t) {
    double w = std::exp(0.6 * rng.normal());
    if (t == static_cast<std::size_t>(topic)) w *= 3.0;
    b.topic_distribution[t] = w;
    total += w;
  }
  for (auto& w : b.topic_distribution) w /= total;
  const bool sarcastic = label == Label::kSarcastic;
  if (opt.separable) {
    const double width = 0.5 - opt.margin;
    b.sarcasm_rate = sarcastic ? 1.0 - width * rng.uniform() : width * rng.uniform();
  } else {
    b.sarcasm_rate = clamp01((sarcastic ? 0.62 : 0.3) + 0.15 * rng.normal());
  }
  const double days = 30.0 + 335.0 * rng.uniform();
  b.comment_frequency = static_cast<double>(b.comment_count) / days;
  b.reply_ratio = clamp01((hierarchy == Hierarchy::kNested ? 0.6 : 0.3) + 0.12 * rng.normal());
  return b;
}

}  // namespace

std::vector<CommentRecord> make_synthetic_corpus(const SyntheticOptions& opt) {
  if (opt.count == 0) throw config_error("synthetic corpus size must be positive");
  if (opt.sarcastic_share < 0.0 || opt.sarcastic_share > 1.0) {
    throw config_error("sarcastic_share must be in [0,1]");
  }
  if (opt.separable && (opt.margin <= 0.0 || opt.margin > 0.5)) {
    throw config_error("margin must be in (0, 0.5]");
  }
  Rng rng = Rng::substream(opt.seed, "corpus.synthetic");
  std::vector<CommentRecord> out;
  out.reserve(opt.count);
  // Exact label counts, then shuffled.
  const auto n_sarc = static_cast<std::size_t>(std::llround(opt.sarcastic_share * opt.count));
  std::vector<Label> labels(opt.count, Label::kNonSarcastic);
  std::fill(labels.begin(), labels.begin() + static_cast<long>(n_sarc), Label::kSarcastic);
  rng.shuffle(labels);
  for (std::size_t i = 0; i < opt.count; ++i) {
    CommentRecord r;
    r.id = opt.id_prefix + std::to_string(i);
    r.label = labels[i];
    r.topic = static_cast<Topic>(rng.below(kTopicCount));
    r.hierarchy = rng.bernoulli(0.35) ? Hierarchy::kNested : Hierarchy::kTopLevel;
    const bool sarcastic_text =
        opt.separable ? rng.bernoulli(0.5) : r.label == Label::kSarcastic;
    const Words& pool = sarcastic_text ? kSarcastic : kSincere;
    r.text = fill(pool[rng.below(pool.size())], rng);
    if (r.hierarchy == Hierarchy::kNested) {
      r.context = std::string(kContexts[rng.below(kContexts.size())]);
    }
    if (opt.with_behavior) {
      r.behavior = make_behavior(r.label, r.topic, r.hierarchy, opt, rng);
      r.behavior_source = "real";
    }
    r.provenance = "seed";
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace sarc::corpus
