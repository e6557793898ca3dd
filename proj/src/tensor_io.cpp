#include "tpca/tensor_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace tpca {

std::string_view to_string(TensorKind k) {
  switch (k) {
    case TensorKind::super_symmetric: return "super_symmetric";
    case TensorKind::general: return "general";
    case TensorKind::partial_symmetric: return "partial_symmetric";
  }
  return "general";
}

TensorKind parse_kind(std::string_view s) {
  if (s == "super_symmetric") return TensorKind::super_symmetric;
  if (s == "general") return TensorKind::general;
  if (s == "partial_symmetric") return TensorKind::partial_symmetric;
  throw DomainError("unknown tensor kind '" + std::string(s) + "'");
}

ParseError::ParseError(int line, int column, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  std::string_view text;
  int column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

long parse_int(const Token& t, int line) {
  long v = 0;
  auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc() || p != t.text.data() + t.text.size())
    throw ParseError(line, t.column, "expected an integer, got '" + std::string(t.text) + "'");
  return v;
}

double parse_double(const Token& t, int line) {
  double v = 0;
  auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc() || p != t.text.data() + t.text.size() || !std::isfinite(v))
    throw ParseError(line, t.column, "expected a finite number, got '" + std::string(t.text) + "'");
  return v;
}

Index partial_rep(const Index& x) {
  Index a = x, b{x[2], x[1], x[0], x[3]}, c{x[0], x[3], x[2], x[1]}, d{x[2], x[3], x[0], x[1]};
  return std::min({a, b, c, d});
}

}  // namespace

TensorFile parse_tensor_file(std::istream& in) {
  TensorFile f;
  std::string raw;
  int lineno = 0;
  enum class Stage { header, kind, dims, count, body } stage = Stage::header;
  long expected = 0;
  std::set<Index> seen;
  int last_line = 0;

  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const auto toks = tokenize(raw);
    if (toks.empty()) continue;
    last_line = lineno;
    switch (stage) {
      case Stage::header: {
        if (toks[0].text != "tpca-tensor") throw ParseError(lineno, toks[0].column, "expected 'tpca-tensor'");
        if (toks.size() != 2) throw ParseError(lineno, toks[0].column, "expected 'tpca-tensor <version>'");
        f.format_version = static_cast<int>(parse_int(toks[1], lineno));
        if (f.format_version != 1) throw ParseError(lineno, toks[1].column, "unsupported format version");
        stage = Stage::kind;
        break;
      }
      case Stage::kind: {
        if (toks[0].text != "kind" || toks.size() != 2) throw ParseError(lineno, toks[0].column, "expected 'kind <kind>'");
        try {
          f.kind = parse_kind(toks[1].text);
        } catch (const DomainError& e) {
          throw ParseError(lineno, toks[1].column, e.what());
        }
        stage = Stage::dims;
        break;
      }
      case Stage::dims: {
        if (toks[0].text != "dims" || toks.size() < 2) throw ParseError(lineno, toks[0].column, "expected 'dims n1 n2 ...'");
        for (std::size_t k = 1; k < toks.size(); ++k) {
          const long v = parse_int(toks[k], lineno);
          if (v < 1 || v > 1000000) throw ParseError(lineno, toks[k].column, "dimension out of range");
          f.dims.push_back(static_cast<int>(v));
        }
        if (f.kind == TensorKind::super_symmetric &&
            std::any_of(f.dims.begin(), f.dims.end(), [&](int v) { return v != f.dims.front(); }))
          throw ParseError(lineno, toks[1].column, "super_symmetric tensors need equal dimensions");
        if (f.kind == TensorKind::partial_symmetric &&
            (f.dims.size() != 4 || f.dims[0] != f.dims[2] || f.dims[1] != f.dims[3]))
          throw ParseError(lineno, toks[1].column, "partial_symmetric tensors need dims n m n m");
        stage = Stage::count;
        break;
      }
      case Stage::count: {
        if (toks[0].text != "entries" || toks.size() != 2) throw ParseError(lineno, toks[0].column, "expected 'entries <count>'");
        expected = parse_int(toks[1], lineno);
        if (expected < 0) throw ParseError(lineno, toks[1].column, "entry count must be non-negative");
        stage = Stage::body;
        break;
      }
      case Stage::body: {
        if (static_cast<long>(f.entries.size()) == expected)
          throw ParseError(lineno, toks[0].column, "more entries than declared");
        if (toks.size() != f.dims.size() + 1)
          throw ParseError(lineno, toks[0].column,
                           "expected " + std::to_string(f.dims.size()) + " indices and a value");
        Index idx(f.dims.size());
        for (std::size_t k = 0; k < f.dims.size(); ++k) {
          const long v = parse_int(toks[k], lineno);
          if (v < 1 || v > f.dims[k])
            throw ParseError(lineno, toks[k].column, "index " + std::to_string(v) + " out of range 1.." + std::to_string(f.dims[k]));
          idx[k] = static_cast<int>(v - 1);
        }
        const double value = parse_double(toks.back(), lineno);
        if (f.kind == TensorKind::super_symmetric && !std::is_sorted(idx.begin(), idx.end()))
          throw ParseError(lineno, toks[0].column, "super_symmetric entries must use non-decreasing indices");
        if (f.kind == TensorKind::partial_symmetric && partial_rep(idx) != idx)
          throw ParseError(lineno, toks[0].column, "partial_symmetric entries must use the smallest tuple of their orbit");
        if (!seen.insert(idx).second) throw ParseError(lineno, toks[0].column, "duplicate entry");
        f.entries.emplace_back(std::move(idx), value);
        break;
      }
    }
  }
  if (stage != Stage::body) throw ParseError(lineno + 1, 1, "unexpected end of file (incomplete header)");
  if (static_cast<long>(f.entries.size()) != expected)
    throw ParseError(last_line + 1, 1,
                     "expected " + std::to_string(expected) + " entries, found " + std::to_string(f.entries.size()));
  return f;
}

TensorFile read_tensor_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_tensor_file(in);
}

void write_tensor_file(std::ostream& out, const TensorFile& f) {
  out << "tpca-tensor " << f.format_version << '\n';
  out << "kind " << to_string(f.kind) << '\n';
  out << "dims";
  for (int d : f.dims) out << ' ' << d;
  out << '\n';
  out << "entries " << f.entries.size() << '\n';
  char buf[64];
  for (const auto& [idx, v] : f.entries) {
    for (int i : idx) out << i + 1 << ' ';
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf << '\n';
  }
}

void write_tensor_file(const std::string& path, const TensorFile& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_tensor_file(out, f);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

namespace {

bool stored(double v) { return v != 0.0 || std::signbit(v); }

}  // namespace

TensorFile to_file(const SuperSymmetricTensor& t) {
  TensorFile f;
  f.kind = TensorKind::super_symmetric;
  f.dims.assign(static_cast<std::size_t>(t.order()), t.dim());
  for (std::size_t c = 0; c < t.num_classes(); ++c)
    if (stored(t.values()[c])) {
      const auto tup = t.layout().tuple(c);
      f.entries.emplace_back(Index(tup.begin(), tup.end()), t.values()[c]);
    }
  return f;
}

TensorFile to_file(const GeneralTensor& t) {
  TensorFile f;
  f.kind = TensorKind::general;
  f.dims = t.dims();
  Index idx(t.dims().size());
  for (std::size_t flat = 0; flat < t.size(); ++flat)
    if (stored(t.values()[flat])) {
      t.unravel(flat, idx);
      f.entries.emplace_back(idx, t.values()[flat]);
    }
  return f;
}

TensorFile to_file(const PartialSymmetricTensor& t) {
  TensorFile f;
  f.kind = TensorKind::partial_symmetric;
  f.dims = {t.n(), t.m(), t.n(), t.m()};
  Index idx(4);
  for (std::size_t flat = 0; flat < t.dense().size(); ++flat) {
    t.dense().unravel(flat, idx);
    if (partial_rep(idx) == idx && stored(t.dense().values()[flat])) f.entries.emplace_back(idx, t.dense().values()[flat]);
  }
  return f;
}

SuperSymmetricTensor to_super_symmetric(const TensorFile& f) {
  if (f.kind != TensorKind::super_symmetric) throw DomainError("file does not hold a super_symmetric tensor");
  SuperSymmetricTensor t(f.dims.front(), f.order());
  for (const auto& [idx, v] : f.entries) t.set(idx, v);
  return t;
}

GeneralTensor to_general(const TensorFile& f) {
  switch (f.kind) {
    case TensorKind::super_symmetric: return to_super_symmetric(f).to_dense();
    case TensorKind::partial_symmetric: return to_partial_symmetric(f).dense();
    case TensorKind::general: break;
  }
  GeneralTensor t(f.dims);
  for (const auto& [idx, v] : f.entries) t(idx) = v;
  return t;
}

PartialSymmetricTensor to_partial_symmetric(const TensorFile& f) {
  if (f.kind != TensorKind::partial_symmetric) throw DomainError("file does not hold a partial_symmetric tensor");
  PartialSymmetricTensor t(f.dims[0], f.dims[1]);
  for (const auto& [idx, v] : f.entries) t.set(idx[0], idx[1], idx[2], idx[3], v);
  return t;
}

}  // namespace tpca
