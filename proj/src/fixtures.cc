// latdec/fixtures.cc

// Copyright 2026 The latdec Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "latdec/fixtures.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>

#include "latdec/compose.h"
#include "latdec/lm-to-fst.h"
#include "latdec/util.h"

namespace latdec {

namespace {

using Gram = std::vector<std::string>;

struct GramValue {
  double log10p = 0.0;
  bool has_backoff = false;
  double log10bo = 0.0;
};

// In-progress model: grams per level, insertion-ordered within a level.
struct Model {
  std::vector<std::vector<std::pair<Gram, GramValue>>> levels;  // [k-1]
  std::map<Gram, int> index;  // gram -> position in its level

  GramValue *FindGram(const Gram &g) {
    const auto it = index.find(g);
    if (it == index.end()) return nullptr;
    return &levels[g.size() - 1][it->second].second;
  }

  void Add(const Gram &g, GramValue v) {
    index.emplace(g, static_cast<int>(levels[g.size() - 1].size()));
    levels[g.size() - 1].emplace_back(g, v);
  }
};

// Backoff recursion in log10 space over the partial model, used while
// generating so higher-order backoff weights normalize exactly.
double Log10Prob(Model &m, const Gram &hist, const std::string &word) {
  double bo_sum = 0.0;
  for (std::size_t drop = 0; drop <= hist.size(); ++drop) {
    Gram g(hist.begin() + drop, hist.end());
    g.push_back(word);
    if (const GramValue *v = m.FindGram(g)) return bo_sum + v->log10p;
    if (drop < hist.size()) {
      const Gram ctx(hist.begin() + drop, hist.end());
      if (const GramValue *c = m.FindGram(ctx))
        if (c->has_backoff) bo_sum += c->log10bo;
    }
  }
  throw Error(StrCat("fixture generator lost unigram \"", word, "\""));
}

std::string FormatLog10(double v) {
  // Enough digits that file rounding stays below the 1e-9 the test
  // tolerances allow for sums over a whole vocabulary.
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12f", v);
  return buf;
}

}  // namespace

std::string RandomArpa(const ArpaSpec &spec) {
  if (spec.order < 1 || spec.order > 4)
    throw Error("RandomArpa supports orders 1..4");
  if (spec.words.empty()) throw Error("RandomArpa needs words");
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Successor tokens carry unigram mass; <s> is history-only.
  std::vector<std::string> succ = spec.words;
  succ.push_back("</s>");

  Model m;
  m.levels.resize(spec.order);

  // Unigrams: normalized random draws over the successors.
  {
    std::vector<double> w(succ.size());
    double sum = 0.0;
    for (auto &x : w) sum += (x = 0.25 + unit(rng));
    for (std::size_t i = 0; i < succ.size(); ++i)
      m.Add({succ[i]}, {std::log10(w[i] / sum), false, 0.0});
    if (spec.order > 1) m.Add({"<s>"}, {-99.0, false, 0.0});
  }

  for (int k = 2; k <= spec.order; ++k) {
    // Histories are the grams of the previous level, minus those ending in
    // </s>, each kept with probability context_keep.
    std::vector<Gram> hists;
    for (const auto &[g, v] : m.levels[k - 2]) {
      if (g.back() == "</s>") continue;
      // The sentence-begin history always exists so start states see
      // explicit grams; everything else is random.
      const bool bos_hist = k == 2 && g.back() == "<s>";
      if (bos_hist || unit(rng) < spec.context_keep) hists.push_back(g);
    }
    for (const Gram &h : hists) {
      // Proper subset of successors so the backoff denominator stays > 0.
      std::vector<std::string> chosen;
      for (const auto &s : succ)
        if (unit(rng) < 0.5) chosen.push_back(s);
      if (chosen.empty())
        chosen.push_back(succ[static_cast<std::size_t>(unit(rng) *
                                                       succ.size()) %
                              succ.size()]);
      if (chosen.size() == succ.size()) chosen.pop_back();

      const double mass =
          std::min(0.95, spec.explicit_mass * (0.8 + 0.25 * unit(rng)));
      std::vector<double> w(chosen.size());
      double sum = 0.0;
      for (auto &x : w) sum += (x = 0.25 + unit(rng));

      const Gram tail(h.begin() + 1, h.end());
      double covered = 0.0;
      for (const auto &s : chosen)
        covered += std::pow(10.0, Log10Prob(m, tail, s));
      const double bo = (1.0 - mass) / (1.0 - covered);

      GramValue *hv = m.FindGram(h);
      hv->has_backoff = true;
      hv->log10bo = std::log10(bo);

      for (std::size_t i = 0; i < chosen.size(); ++i) {
        Gram g = h;
        g.push_back(chosen[i]);
        m.Add(g, {std::log10(mass * w[i] / sum), false, 0.0});
      }
    }
  }

  std::ostringstream out;
  out << "\\data\\\n";
  for (int k = 1; k <= spec.order; ++k)
    out << "ngram " << k << "=" << m.levels[k - 1].size() << "\n";
  for (int k = 1; k <= spec.order; ++k) {
    out << "\n\\" << k << "-grams:\n";
    for (const auto &[g, v] : m.levels[k - 1]) {
      out << FormatLog10(v.log10p);
      for (const auto &w : g) out << ' ' << w;
      if (v.has_backoff) out << ' ' << FormatLog10(v.log10bo);
      out << "\n";
    }
  }
  out << "\n\\end\\\n";
  return out.str();
}

Wfst BuildLexicon(const LexiconSpec &spec,
                  const std::shared_ptr<SymbolTable> &vocab) {
  if (!vocab) throw Error("lexicon needs a vocabulary");
  std::vector<std::string> names = spec.words;
  if (names.empty()) {
    if (spec.num_words < 1) throw Error("lexicon needs at least one word");
    for (int k = 1; k <= spec.num_words; ++k) names.push_back(StrCat("w", k));
  }
  const int n = static_cast<int>(names.size());
  if (spec.shared_first < 0 || spec.shared_first > n)
    throw Error("shared_first must lie in [0, num_words]");
  if (spec.self_loop_cost < 0.0) throw Error("self_loop_cost must be >= 0");

  const int onsets = spec.shared_first > 0 ? spec.shared_first : n;
  auto phones = std::make_shared<SymbolTable>();
  for (int p = 1; p <= onsets + n; ++p) phones->AddSymbol(StrCat("p", p));

  Wfst fst;
  const int root = fst.AddState();
  fst.SetStart(root);
  fst.SetFinal(root, DualCost::One());
  for (int k = 0; k < n; ++k) {
    const int word = vocab->Find(names[k]);
    if (word <= 0)
      throw Error(StrCat("lexicon word \"", names[k],
                         "\" is missing from the vocabulary"));
    const int first = spec.shared_first > 0 ? 1 + k % spec.shared_first : 1 + k;
    const int second = onsets + 1 + k;
    const int mid = fst.AddState();
    fst.AddArc(root, Arc(first, word, DualCost::One(), mid));
    fst.AddArc(mid, Arc(second, 0, DualCost::One(), root));
    if (spec.self_loop_cost > 0.0)
      fst.AddArc(mid, Arc(second, 0, DualCost(spec.self_loop_cost, 0.0), mid));
  }
  fst.isymbols = phones;
  fst.osymbols = vocab;
  fst.SortArcs();
  fst.Validate();
  return fst;
}

Wfst BuildDecodingGraph(const Wfst &lexicon, const BackoffLm &g) {
  return Compose(lexicon, LmToFst(g));
}

DecodingFixture MakeDecodingFixture(const FixtureSpec &spec) {
  if (spec.num_words < 1) throw Error("fixture needs at least one word");
  std::vector<std::string> words;
  words.reserve(spec.num_words);
  for (int k = 1; k <= spec.num_words; ++k) words.push_back(StrCat("w", k));

  ArpaSpec small_spec;
  small_spec.order = spec.small_order;
  small_spec.words = words;
  small_spec.seed = spec.seed;
  ArpaSpec large_spec;
  large_spec.order = spec.large_order;
  large_spec.words = words;
  large_spec.seed = spec.seed + 1000003u;

  DecodingFixture out;
  out.small_arpa = RandomArpa(small_spec);
  out.large_arpa = RandomArpa(large_spec);
  out.vocab = std::make_shared<SymbolTable>();
  {
    std::istringstream in(out.small_arpa);
    out.small_lm =
        std::make_shared<BackoffLm>(BackoffLm::LoadArpa(in, out.vocab));
  }
  {
    std::istringstream in(out.large_arpa);
    out.large_lm =
        std::make_shared<BackoffLm>(BackoffLm::LoadArpa(in, out.vocab));
  }
  LexiconSpec lex = spec.lexicon;
  lex.num_words = spec.num_words;
  lex.words.clear();
  out.lexicon = BuildLexicon(lex, out.vocab);
  out.graph = BuildDecodingGraph(out.lexicon, *out.small_lm);
  return out;
}

FlipFixture MakeFlipFixture() {
  FlipFixture out;
  DecodingFixture &fx = out.fixture;
  // Unigram grammar: b likely, c rare.
  fx.small_arpa =
      "\\data\\\n"
      "ngram 1=4\n"
      "\n"
      "\\1-grams:\n"
      "-0.60 a\n"
      "-0.35 b\n"
      "-3.10 c\n"
      "-0.52 </s>\n"
      "\n"
      "\\end\\\n";
  // Bigram grammar: after a, c is likely and b is rare.
  fx.large_arpa =
      "\\data\\\n"
      "ngram 1=5\n"
      "ngram 2=2\n"
      "\n"
      "\\1-grams:\n"
      "-99 <s>\n"
      "-0.60 a -0.56631\n"
      "-0.35 b\n"
      "-3.10 c\n"
      "-0.52 </s>\n"
      "\n"
      "\\2-grams:\n"
      "-1.30103 a b\n"
      "-0.09691 a c\n"
      "\n"
      "\\end\\\n";
  fx.vocab = std::make_shared<SymbolTable>();
  {
    std::istringstream in(fx.small_arpa);
    fx.small_lm = std::make_shared<BackoffLm>(BackoffLm::LoadArpa(in, fx.vocab));
  }
  {
    std::istringstream in(fx.large_arpa);
    fx.large_lm = std::make_shared<BackoffLm>(BackoffLm::LoadArpa(in, fx.vocab));
  }
  LexiconSpec lex;
  lex.words = {"a", "b", "c"};
  fx.lexicon = BuildLexicon(lex, fx.vocab);
  fx.graph = BuildDecodingGraph(fx.lexicon, *fx.small_lm);

  // Four frames spelling "a" then a word whose onset and closure are hot for
  // both b and c: the acoustics cannot separate them, only the grammar can.
  LogLikelihoods &ll = out.loglikes;
  ll.num_frames = 4;
  ll.num_labels = 6;
  ll.values.assign(4, std::vector<double>(6, -4.0));
  ll.values[0][0] = 0.0;                    // p1, onset of a
  ll.values[1][3] = 0.0;                    // p4, closure of a
  ll.values[2][1] = ll.values[2][2] = 0.0;  // p2 and p3, onsets of b and c
  ll.values[3][4] = ll.values[3][5] = 0.0;  // p5 and p6, closures of b and c
  out.ref_words = {fx.vocab->Find("a"), fx.vocab->Find("c")};
  return out;
}

}  // namespace latdec
