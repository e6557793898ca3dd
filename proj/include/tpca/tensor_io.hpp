#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tpca/tensor.hpp"

namespace tpca {

enum class TensorKind { super_symmetric, general, partial_symmetric };

std::string_view to_string(TensorKind k);
TensorKind parse_kind(std::string_view s);

/// Text tensor file:
///
///   tpca-tensor 1
///   kind super_symmetric
///   dims 3 3 3 3
///   entries 2
///   1 1 1 1 0.2883
///   1 1 1 2 -0.0031
///
/// Indices are 1-based, one entry per line, '#' starts a comment. Entries not
/// listed are zero. super_symmetric files list non-decreasing index tuples
/// only; partial_symmetric files (dims n m n m) list only the smallest tuple
/// of each orbit under (i,j,k,l) -> (k,j,i,l), (i,l,k,j). Duplicate keys are
/// rejected.
struct TensorFile {
  int format_version = 1;
  TensorKind kind = TensorKind::general;
  std::vector<int> dims;
  std::vector<std::pair<Index, double>> entries;  ///< 0-based indices

  int order() const { return static_cast<int>(dims.size()); }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& what);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

TensorFile parse_tensor_file(std::istream& in);
TensorFile read_tensor_file(const std::string& path);
void write_tensor_file(std::ostream& out, const TensorFile& f);
void write_tensor_file(const std::string& path, const TensorFile& f);

TensorFile to_file(const SuperSymmetricTensor& t);
TensorFile to_file(const GeneralTensor& t);
TensorFile to_file(const PartialSymmetricTensor& t);

SuperSymmetricTensor to_super_symmetric(const TensorFile& f);
GeneralTensor to_general(const TensorFile& f);
PartialSymmetricTensor to_partial_symmetric(const TensorFile& f);

}  // namespace tpca
