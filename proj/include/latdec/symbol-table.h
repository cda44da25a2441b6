// latdec/symbol-table.h

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

#ifndef LATDEC_SYMBOL_TABLE_H_
#define LATDEC_SYMBOL_TABLE_H_

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace latdec {

// Bidirectional symbol <-> integer id table. Id 0 is reserved for <eps> by
// the default constructor; files may override the layout. The text format is
// one "symbol<TAB>id" pair per line.
class SymbolTable {
 public:
  SymbolTable();

  // Returns the existing id or assigns the next free one.
  int AddSymbol(const std::string &symbol);
  void AddPair(const std::string &symbol, int id);

  // -1 when absent.
  int Find(const std::string &symbol) const;
  // Empty string when absent.
  const std::string &Find(int id) const;
  bool Contains(int id) const;

  int NumIds() const { return static_cast<int>(id_to_symbol_.size()); }

  static SymbolTable Read(std::istream &in);
  static SymbolTable ReadFile(const std::string &path);
  void Write(std::ostream &out) const;
  void WriteFile(const std::string &path) const;

 private:
  std::unordered_map<std::string, int> symbol_to_id_;
  std::vector<std::string> id_to_symbol_;
};

}  // namespace latdec

#endif  // LATDEC_SYMBOL_TABLE_H_
