// latdec/symbol-table.cc

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

#include "latdec/symbol-table.h"

#include <fstream>
#include <istream>
#include <ostream>

#include "latdec/util.h"

namespace latdec {

SymbolTable::SymbolTable() { AddPair("<eps>", 0); }

int SymbolTable::AddSymbol(const std::string &symbol) {
  auto it = symbol_to_id_.find(symbol);
  if (it != symbol_to_id_.end()) return it->second;
  const int id = static_cast<int>(id_to_symbol_.size());
  AddPair(symbol, id);
  return id;
}

void SymbolTable::AddPair(const std::string &symbol, int id) {
  if (id < 0) throw Error(StrCat("negative symbol id for \"", symbol, "\""));
  auto it = symbol_to_id_.find(symbol);
  if (it != symbol_to_id_.end()) {
    if (it->second != id)
      throw Error(StrCat("symbol \"", symbol, "\" remapped from ", it->second,
                         " to ", id));
    return;
  }
  if (id >= static_cast<int>(id_to_symbol_.size()))
    id_to_symbol_.resize(id + 1);
  if (!id_to_symbol_[id].empty() && id_to_symbol_[id] != symbol)
    throw Error(StrCat("symbol id ", id, " already bound to \"",
                       id_to_symbol_[id], "\""));
  id_to_symbol_[id] = symbol;
  symbol_to_id_.emplace(symbol, id);
}

int SymbolTable::Find(const std::string &symbol) const {
  auto it = symbol_to_id_.find(symbol);
  return it == symbol_to_id_.end() ? -1 : it->second;
}

const std::string &SymbolTable::Find(int id) const {
  static const std::string kEmpty;
  if (id < 0 || id >= static_cast<int>(id_to_symbol_.size())) return kEmpty;
  return id_to_symbol_[id];
}

bool SymbolTable::Contains(int id) const {
  return id >= 0 && id < static_cast<int>(id_to_symbol_.size()) &&
         !id_to_symbol_[id].empty();
}

SymbolTable SymbolTable::Read(std::istream &in) {
  SymbolTable table;
  table.symbol_to_id_.clear();
  table.id_to_symbol_.clear();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto trimmed = TrimWhitespace(line);
    if (trimmed.empty()) continue;
    const auto fields = SplitWhitespace(trimmed);
    if (fields.size() != 2)
      throw ParseError(
          StrCat("symbol table line ", lineno, ": expected \"symbol<TAB>id\""));
    table.AddPair(fields[0],
                  static_cast<int>(ParseInt(fields[1], "symbol id")));
  }
  return table;
}

SymbolTable SymbolTable::ReadFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(StrCat("cannot open symbol table: ", path));
  return Read(in);
}

void SymbolTable::Write(std::ostream &out) const {
  for (int id = 0; id < static_cast<int>(id_to_symbol_.size()); ++id) {
    if (!id_to_symbol_[id].empty()) out << id_to_symbol_[id] << '\t' << id << '\n';
  }
}

void SymbolTable::WriteFile(const std::string &path) const {
  std::ofstream out(path);
  if (!out) throw Error(StrCat("cannot write symbol table: ", path));
  Write(out);
}

}  // namespace latdec
