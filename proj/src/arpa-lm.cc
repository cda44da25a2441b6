// latdec/arpa-lm.cc

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

#include "latdec/arpa-lm.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>

namespace latdec {

namespace {
constexpr double kLn10 = 2.30258509299404568402;
}

// One-shot ARPA reader. Contexts are created for every k-gram with k <
// order, so an n-gram's history is required to exist as an entry one
// section earlier; that is what makes Step a single map walk.
class ArpaParser {
 public:
  ArpaParser(std::istream &in, std::shared_ptr<SymbolTable> vocab)
      : in_(in) {
    lm_.vocab_ = vocab ? std::move(vocab) : std::make_shared<SymbolTable>();
  }

  BackoffLm Parse() {
    ReadHeader();
    ReadSections();
    if (lm_.known_words_.empty()) throw Error("ARPA model has no unigrams");
    Link();
    return std::move(lm_);
  }

 private:
  [[noreturn]] void Fail(const std::string &msg) {
    throw ParseError(StrCat("ARPA line ", lineno_, ": ", msg));
  }

  // Next non-blank line, trimmed. False on EOF.
  bool NextLine() {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++lineno_;
      line_ = std::string(TrimWhitespace(raw));
      if (!line_.empty()) return true;
    }
    line_.clear();
    return false;
  }

  void ReadHeader() {
    if (!NextLine() || line_ != "\\data\\")
      Fail("expected \\data\\ header");
    while (NextLine()) {
      if (line_.rfind("ngram ", 0) != 0) break;
      const auto body = line_.substr(6);
      const auto eq = body.find('=');
      if (eq == std::string::npos) Fail("bad ngram count line");
      const long k = ParseInt(TrimWhitespace(body.substr(0, eq)), "order");
      const long n =
          ParseInt(TrimWhitespace(body.substr(eq + 1)), "ngram count");
      if (k < 1 || k > 9 || n < 0) Fail("ngram count out of range");
      counts_.resize(std::max<std::size_t>(counts_.size(), k + 1), -1);
      if (counts_[k] >= 0) Fail("duplicate ngram count");
      counts_[k] = n;
    }
    if (counts_.size() < 2) Fail("no ngram counts in \\data\\");
    for (std::size_t k = 1; k < counts_.size(); ++k)
      if (counts_[k] < 0) Fail(StrCat("missing ngram ", k, " count"));
    lm_.order_ = static_cast<int>(counts_.size()) - 1;
    // Root context: the empty history.
    ctx_ids_[{}] = 0;
    lm_.contexts_.emplace_back();
  }

  void ReadSections() {
    // ReadHeader left the first section header in line_.
    for (int k = 1; k <= lm_.order_; ++k) {
      if (counts_[k] == 0) {
        // A zero-count section may be omitted entirely.
        const std::string header = StrCat("\\", k, "-grams:");
        if (line_ == header && !NextLine()) Fail("unexpected EOF");
        continue;
      }
      if (line_ != StrCat("\\", k, "-grams:"))
        Fail(StrCat("expected \\", k, "-grams: section"));
      long read = 0;
      while (NextLine() && !line_.empty() && line_[0] != '\\') {
        ParseGram(k);
        ++read;
      }
      if (read != counts_[k])
        Fail(StrCat("\\", k, "-grams: declared ", counts_[k], " entries, found ",
                    read));
    }
    if (line_ != "\\end\\") Fail("expected \\end\\");
    if (NextLine()) Fail("content after \\end\\");
  }

  void ParseGram(int k) {
    const auto fields = SplitWhitespace(line_);
    const std::size_t nf = fields.size();
    if (nf != static_cast<std::size_t>(k) + 1 &&
        nf != static_cast<std::size_t>(k) + 2)
      Fail(StrCat(k, "-gram with ", nf, " fields"));
    const double cost = -kLn10 * ParseDouble(fields[0], "log10 probability");
    const bool has_backoff = nf == static_cast<std::size_t>(k) + 2;
    const double backoff =
        has_backoff ? -kLn10 * ParseDouble(fields[nf - 1], "log10 backoff")
                    : 0.0;

    std::vector<int> ids(k);
    for (int i = 0; i < k; ++i) {
      const std::string word(fields[1 + i]);
      if (k == 1) {
        ids[i] = lm_.vocab_->AddSymbol(word);
        continue;
      }
      ids[i] = lm_.vocab_->Find(word);
      if (ids[i] < 0 || !lm_.known_words_.count(ids[i]))
        Fail(StrCat(k, "-gram over word \"", word,
                    "\" missing from the unigram section"));
    }
    if (k == 1) {
      const std::string &word = std::string(fields[1]);
      if (word == "<s>") lm_.bos_id_ = ids[0];
      if (word == "</s>") lm_.eos_id_ = ids[0];
      if (word == "<unk>") lm_.unk_id_ = ids[0];
      if (!lm_.known_words_.insert(ids[0]).second)
        Fail(StrCat("duplicate unigram \"", word, "\""));
    }

    // Entry under the history context, which must already exist.
    std::vector<int> hist(ids.begin(), ids.end() - 1);
    const auto hit = ctx_ids_.find(hist);
    if (hit == ctx_ids_.end())
      Fail(StrCat(k, "-gram whose history has no ", k - 1, "-gram entry"));
    auto &entries = lm_.contexts_[hit->second].entries;
    if (!entries.emplace(ids.back(), BackoffLm::Entry{cost, 0}).second)
      Fail(StrCat("duplicate ", k, "-gram"));

    // Every gram below the top order opens a context for longer histories.
    if (k < lm_.order_) {
      const auto [it, inserted] =
          ctx_ids_.emplace(ids, static_cast<int>(lm_.contexts_.size()));
      if (!inserted) Fail("duplicate context");
      lm_.contexts_.emplace_back();
      lm_.contexts_.back().history = ids;
      lm_.contexts_.back().backoff_cost = backoff;
    } else if (has_backoff) {
      Fail(StrCat("backoff weight on a top-order ", k, "-gram"));
    }
  }

  int LongestSuffixCtx(std::vector<int> seq) const {
    while (!seq.empty()) {
      const auto it = ctx_ids_.find(seq);
      if (it != ctx_ids_.end()) return it->second;
      seq.erase(seq.begin());
    }
    return 0;
  }

  void Link() {
    for (auto &ctx : lm_.contexts_) {
      if (ctx.history.empty()) continue;  // root backs off to itself
      ctx.backoff_ctx = LongestSuffixCtx(
          std::vector<int>(ctx.history.begin() + 1, ctx.history.end()));
      for (auto &[word, entry] : ctx.entries) {
        auto seq = ctx.history;
        seq.push_back(word);
        entry.next_ctx = LongestSuffixCtx(seq);
      }
    }
    for (auto &[word, entry] : lm_.contexts_[0].entries)
      entry.next_ctx = LongestSuffixCtx({word});
    lm_.start_ctx_ =
        lm_.bos_id_ >= 0 ? LongestSuffixCtx({lm_.bos_id_}) : 0;
  }

  std::istream &in_;
  BackoffLm lm_;
  std::map<std::vector<int>, int> ctx_ids_;
  std::vector<long> counts_;
  std::string line_;
  int lineno_ = 0;
};

BackoffLm BackoffLm::LoadArpa(std::istream &in,
                              std::shared_ptr<SymbolTable> vocab) {
  return ArpaParser(in, std::move(vocab)).Parse();
}

BackoffLm BackoffLm::LoadArpaFile(const std::string &path,
                                  std::shared_ptr<SymbolTable> vocab) {
  std::ifstream in(path);
  if (!in) throw Error(StrCat("cannot open ARPA file: ", path));
  return LoadArpa(in, std::move(vocab));
}

std::vector<int> BackoffLm::RegularWords() const {
  std::vector<int> out;
  out.reserve(known_words_.size());
  for (const int w : known_words_)
    if (w != bos_id_ && w != eos_id_) out.push_back(w);
  std::sort(out.begin(), out.end());
  return out;
}

std::pair<LmState, double> BackoffLm::Step(LmState s, int word) const {
  if (!HasWord(word)) {
    if (unk_id_ < 0)
      throw OovError(StrCat("word id ", word, " (\"", vocab_->Find(word),
                            "\") not in the model and no <unk> present"));
    word = unk_id_;
  }
  double cost = 0.0;
  int c = s.ctx;
  while (true) {
    const Context &ctx = contexts_[c];
    const auto it = ctx.entries.find(word);
    if (it != ctx.entries.end())
      return {LmState{it->second.next_ctx}, cost + it->second.cost};
    if (c == 0) break;
    cost += ctx.backoff_cost;
    c = ctx.backoff_ctx;
  }
  throw Error("known word has no unigram entry");
}

double BackoffLm::FinalCost(LmState s) const {
  if (eos_id_ < 0) return 0.0;
  return Step(s, eos_id_).second;
}

double BackoffLm::SentenceCost(const std::vector<int> &words) const {
  LmState s = Start();
  double total = 0.0;
  for (const int w : words) {
    auto [next, cost] = Step(s, w);
    total += cost;
    s = next;
  }
  return total + FinalCost(s);
}

const std::vector<int> &BackoffLm::History(LmState s) const {
  return contexts_.at(s.ctx).history;
}

const std::map<int, BackoffLm::Entry> &BackoffLm::EntriesAt(LmState s) const {
  return contexts_.at(s.ctx).entries;
}

double BackoffLm::BackoffCost(LmState s) const {
  return contexts_.at(s.ctx).backoff_cost;
}

LmState BackoffLm::BackoffState(LmState s) const {
  return LmState{contexts_.at(s.ctx).backoff_ctx};
}

}  // namespace latdec
