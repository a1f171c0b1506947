#include "vrtos/data.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "vrtos/errors.hpp"
#include "vrtos/rng.hpp"

namespace vrtos {

namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

double parse_double(std::string_view tok, std::size_t line, const char* what) {
  std::string_view body = tok;
  if (!body.empty() && body.front() == '+') body.remove_prefix(1);  // from_chars rejects '+'
  double out = 0.0;
  const auto res = std::from_chars(body.data(), body.data() + body.size(), out);
  if (body.empty() || res.ec != std::errc{} || res.ptr != body.data() + body.size())
    throw ParseError("line " + std::to_string(line) + ": bad " + what + " '" +
                         std::string(tok) + "'",
                     line);
  if (!std::isfinite(out))
    throw ParseError("line " + std::to_string(line) + ": non-finite " + what,
                     line);
  return out;
}

long parse_long(std::string_view tok, std::size_t line, const char* what) {
  std::string_view body = tok;
  if (!body.empty() && body.front() == '+') body.remove_prefix(1);
  long out = 0;
  const auto res = std::from_chars(body.data(), body.data() + body.size(), out);
  if (body.empty() || res.ec != std::errc{} || res.ptr != body.data() + body.size())
    throw ParseError("line " + std::to_string(line) + ": bad " + what + " '" +
                         std::string(tok) + "'",
                     line);
  return out;
}

}  // namespace

void SparseRowMatrix::append_row(std::span<const Index> cols,
                                 std::span<const double> vals) {
  if (cols.size() != vals.size())
    throw std::invalid_argument("append_row: length mismatch");
  col_.insert(col_.end(), cols.begin(), cols.end());
  val_.insert(val_.end(), vals.begin(), vals.end());
  row_ptr_.push_back(col_.size());
}

void SparseRowMatrix::validate() const {
  for (std::size_t i = 0; i < n_rows(); ++i) {
    Index prev = -1;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_[k] <= prev)
        throw std::invalid_argument("row " + std::to_string(i) +
                                    ": column indices not strictly increasing");
      if (col_[k] < 0 || static_cast<std::size_t>(col_[k]) >= n_cols_)
        throw std::invalid_argument("row " + std::to_string(i) +
                                    ": column index out of range");
      if (!std::isfinite(val_[k]) || val_[k] == 0.0)
        throw std::invalid_argument("row " + std::to_string(i) +
                                    ": stored value must be finite and nonzero");
      prev = col_[k];
    }
  }
}

LabeledDataset parse_libsvm(std::string_view text,
                            std::optional<std::size_t> n_cols_override) {
  LabeledDataset ds;
  std::vector<Index> cols;
  std::vector<double> vals;
  std::size_t max_col = 0;  // 1-based maximum index seen
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool saw_row = false;

  while (pos <= text.size()) {
    if (pos == text.size()) break;
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (is_blank(line)) continue;

    std::size_t tpos = 0;
    auto next_token = [&]() -> std::string_view {
      while (tpos < line.size() &&
             std::isspace(static_cast<unsigned char>(line[tpos])))
        ++tpos;
      const std::size_t start = tpos;
      while (tpos < line.size() &&
             !std::isspace(static_cast<unsigned char>(line[tpos])))
        ++tpos;
      return line.substr(start, tpos - start);
    };

    const std::string_view label_tok = next_token();
    const double label = parse_double(label_tok, line_no, "label");

    cols.clear();
    vals.clear();
    long prev_idx = 0;
    for (;;) {
      const std::string_view tok = next_token();
      if (tok.empty()) break;
      const std::size_t colon = tok.find(':');
      if (colon == std::string_view::npos)
        throw ParseError("line " + std::to_string(line_no) +
                             ": missing ':' in feature '" + std::string(tok) + "'",
                         line_no);
      const long idx = parse_long(tok.substr(0, colon), line_no, "index");
      if (idx < 1)
        throw ParseError("line " + std::to_string(line_no) +
                             ": feature index must be >= 1",
                         line_no);
      if (idx <= prev_idx)
        throw ParseError("line " + std::to_string(line_no) +
                             ": feature indices not strictly increasing",
                         line_no);
      const double value =
          parse_double(tok.substr(colon + 1), line_no, "feature value");
      if (value == 0.0)
        throw ParseError("line " + std::to_string(line_no) +
                             ": explicit zero feature value",
                         line_no);
      prev_idx = idx;
      cols.push_back(static_cast<Index>(idx - 1));
      vals.push_back(value);
      max_col = std::max(max_col, static_cast<std::size_t>(idx));
    }

    ds.features.append_row(cols, vals);
    ds.labels.push_back(label);
    saw_row = true;
  }

  if (!saw_row) throw ParseError("empty input", 0);

  std::size_t n_cols = max_col;
  if (n_cols_override) {
    if (*n_cols_override < max_col)
      throw ConfigError("n_cols override " + std::to_string(*n_cols_override) +
                        " smaller than max index " + std::to_string(max_col));
    n_cols = *n_cols_override;
  }
  ds.features.set_n_cols(n_cols);
  return ds;
}

std::string serialize_libsvm(const LabeledDataset& dataset) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < dataset.n_rows(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", dataset.labels[i]);
    out += buf;
    const auto row = dataset.features.row(i);
    for (std::size_t k = 0; k < row.size(); ++k) {
      std::snprintf(buf, sizeof(buf), " %ld:%.17g",
                    static_cast<long>(row.cols[k]) + 1, row.vals[k]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

namespace {

std::string gunzip(const std::string& raw) {
  z_stream strm{};
  if (inflateInit2(&strm, 15 + 16) != Z_OK)
    throw IoError("gzip: inflateInit failed");
  std::string out;
  out.resize(std::max<std::size_t>(raw.size() * 4, 1 << 16));
  strm.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(raw.data()));
  strm.avail_in = static_cast<uInt>(raw.size());
  std::size_t written = 0;
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    if (written == out.size()) out.resize(out.size() * 2);
    strm.next_out = reinterpret_cast<Bytef*>(out.data() + written);
    strm.avail_out = static_cast<uInt>(out.size() - written);
    rc = inflate(&strm, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&strm);
      throw IoError("gzip: corrupt stream");
    }
    written = out.size() - strm.avail_out;
  }
  inflateEnd(&strm);
  out.resize(written);
  return out;
}

}  // namespace

LabeledDataset load_libsvm_file(const std::string& path,
                                std::optional<std::size_t> n_cols_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string raw = ss.str();
  if (raw.size() >= 2 && static_cast<unsigned char>(raw[0]) == 0x1f &&
      static_cast<unsigned char>(raw[1]) == 0x8b)
    raw = gunzip(raw);
  return parse_libsvm(raw, n_cols_override);
}

LabeledDataset generate_synthetic(std::size_t n, std::size_t p, double density,
                                  TaskKind task, std::uint64_t seed) {
  if (n < 1 || p < 1) throw ConfigError("generate_synthetic: n, p must be >= 1");
  if (!(density > 0.0) || density > 1.0)
    throw ConfigError("generate_synthetic: density must be in (0, 1]");

  RandomStream rng(seed);
  const std::size_t row_nnz =
      std::min<std::size_t>(p, static_cast<std::size_t>(std::ceil(density * p)));

  // Planted sparse ground truth: ~10% of coordinates active.
  std::vector<double> truth(p, 0.0);
  const std::size_t active = std::max<std::size_t>(1, (p + 9) / 10);
  std::vector<std::size_t> perm(p);
  for (std::size_t j = 0; j < p; ++j) perm[j] = j;
  for (std::size_t j = 0; j < active; ++j) {
    const std::size_t pick = j + rng.bounded(p - j);
    std::swap(perm[j], perm[pick]);
    truth[perm[j]] = rng.normal();
  }

  LabeledDataset ds;
  ds.features.set_n_cols(p);
  std::vector<std::size_t> cols_scratch(p);
  std::vector<Index> cols(row_nnz);
  std::vector<double> vals(row_nnz);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) cols_scratch[j] = j;
    for (std::size_t j = 0; j < row_nnz; ++j) {
      const std::size_t pick = j + rng.bounded(p - j);
      std::swap(cols_scratch[j], cols_scratch[pick]);
    }
    for (std::size_t j = 0; j < row_nnz; ++j)
      cols[j] = static_cast<Index>(cols_scratch[j]);
    std::sort(cols.begin(), cols.begin() + row_nnz);
    for (std::size_t j = 0; j < row_nnz; ++j) {
      double v = rng.normal();
      while (v == 0.0) v = rng.normal();
      vals[j] = v;
    }
    ds.features.append_row(cols, vals);

    double margin = 0.0;
    const auto row = ds.features.row(i);
    for (std::size_t k = 0; k < row.size(); ++k)
      margin += row.vals[k] * truth[row.cols[k]];
    const double noise = 0.1 * rng.normal();
    if (task == TaskKind::logistic) {
      ds.labels.push_back(margin + noise >= 0.0 ? 1.0 : -1.0);
    } else {
      ds.labels.push_back(margin + noise);
    }
  }
  return ds;
}

}  // namespace vrtos
