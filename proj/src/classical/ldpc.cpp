// SPDX-License-Identifier: Apache-2.0
#include "semcomm/classical/ldpc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "semcomm/error.hpp"

namespace semcomm::classical {

namespace {

// Dense GF(2) row as 64-bit words.
struct BitRow {
  std::vector<std::uint64_t> w;
  explicit BitRow(std::size_t n) : w((n + 63) / 64, 0) {}
  void set(std::size_t i) { w[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool get(std::size_t i) const { return (w[i / 64] >> (i % 64)) & 1; }
  void operator^=(const BitRow& o) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] ^= o.w[i];
  }
  bool any() const {
    for (auto x : w)
      if (x) return true;
    return false;
  }
};

}  // namespace

LdpcCode LdpcCode::from_rows(std::size_t n, const std::vector<std::vector<std::size_t>>& rows) {
  if (n == 0 || rows.empty()) throw Error(Errc::invalid_argument, "empty parity-check matrix");
  LdpcCode code;
  code.n_ = n;
  code.rows_ = rows;
  for (auto& r : code.rows_) {
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    for (auto c : r)
      if (c >= n) throw Error(Errc::format, "parity-check column index out of range");
  }
  code.prepare();
  return code;
}

LdpcCode LdpcCode::from_alist_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open alist file: " + path);
  auto next_int = [&in, &path]() {
    long long v;
    if (!(in >> v)) throw Error(Errc::format, "truncated alist file: " + path);
    return v;
  };
  const long long n = next_int();
  const long long m = next_int();
  if (n <= 0 || m <= 0) throw Error(Errc::format, "bad alist dimensions");
  const long long max_col = next_int();
  const long long max_row = next_int();
  if (max_col <= 0 || max_row <= 0) throw Error(Errc::format, "bad alist degrees");
  std::vector<long long> col_deg(static_cast<std::size_t>(n));
  for (auto& d : col_deg) d = next_int();
  std::vector<long long> row_deg(static_cast<std::size_t>(m));
  for (auto& d : row_deg) d = next_int();
  // Column lists (1-based, zero-padded); contents are re-derived from the
  // row lists, so they are only validated for presence.
  for (long long c = 0; c < n; ++c)
    for (long long k = 0; k < max_col; ++k) next_int();
  std::vector<std::vector<std::size_t>> rows(static_cast<std::size_t>(m));
  for (long long r = 0; r < m; ++r) {
    for (long long k = 0; k < max_row; ++k) {
      const long long c = next_int();
      if (c < 0 || c > n) throw Error(Errc::format, "alist column index out of range");
      if (c > 0) rows[static_cast<std::size_t>(r)].push_back(static_cast<std::size_t>(c - 1));
    }
    if (rows[static_cast<std::size_t>(r)].size() !=
        static_cast<std::size_t>(row_deg[static_cast<std::size_t>(r)]))
      throw Error(Errc::format, "alist row degree mismatch");
  }
  return from_rows(static_cast<std::size_t>(n), rows);
}

void LdpcCode::prepare() {
  // Gaussian elimination to reduced row echelon form over GF(2).
  std::vector<BitRow> mat;
  mat.reserve(rows_.size());
  for (const auto& r : rows_) {
    BitRow row(n_);
    for (auto c : r) row.set(c);
    mat.push_back(std::move(row));
  }
  pivot_cols_.clear();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n_ && rank < mat.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < mat.size() && !mat[pivot].get(col)) ++pivot;
    if (pivot == mat.size()) continue;
    std::swap(mat[rank], mat[pivot]);
    for (std::size_t r = 0; r < mat.size(); ++r)
      if (r != rank && mat[r].get(col)) mat[r] ^= mat[rank];
    pivot_cols_.push_back(col);
    ++rank;
  }
  rank_ = rank;
  if (rank_ == 0 || rank_ >= n_)
    throw Error(Errc::format, "parity-check matrix leaves no information bits");
  rref_rows_.assign(rank_, {});
  for (std::size_t r = 0; r < rank_; ++r)
    for (std::size_t c = 0; c < n_; ++c)
      if (mat[r].get(c)) rref_rows_[r].push_back(c);
  std::vector<bool> is_pivot(n_, false);
  for (auto c : pivot_cols_) is_pivot[c] = true;
  info_cols_.clear();
  for (std::size_t c = 0; c < n_; ++c)
    if (!is_pivot[c]) info_cols_.push_back(c);
}

BitStream LdpcCode::encode(const BitStream& info_bits) const {
  if (info_bits.size() != info_length())
    throw Error(Errc::invalid_argument, "ldpc info length mismatch");
  BitStream code(n_, 0);
  for (std::size_t i = 0; i < info_cols_.size(); ++i) code[info_cols_[i]] = info_bits[i] & 1;
  // Each RREF row has exactly one pivot; the pivot bit is the XOR of the
  // row's info-position bits.
  for (std::size_t r = 0; r < rank_; ++r) {
    const std::size_t pivot = pivot_cols_[r];
    std::uint8_t acc = 0;
    for (auto c : rref_rows_[r])
      if (c != pivot) acc ^= code[c];
    code[pivot] = acc;
  }
  return code;
}

bool LdpcCode::parity_ok(const BitStream& codeword) const {
  if (codeword.size() != n_) throw Error(Errc::invalid_argument, "codeword length mismatch");
  for (const auto& row : rows_) {
    std::uint8_t acc = 0;
    for (auto c : row) acc ^= codeword[c];
    if (acc) return false;
  }
  return true;
}

BitStream LdpcCode::extract_info(const BitStream& codeword) const {
  if (codeword.size() != n_) throw Error(Errc::invalid_argument, "codeword length mismatch");
  BitStream info(info_cols_.size());
  for (std::size_t i = 0; i < info_cols_.size(); ++i) info[i] = codeword[info_cols_[i]];
  return info;
}

LdpcCode::DecodeResult LdpcCode::decode(const std::vector<double>& llrs,
                                        std::size_t max_iterations) const {
  if (llrs.size() != n_) throw Error(Errc::invalid_argument, "llr length mismatch");
  if (max_iterations < 1)
    throw Error(Errc::invalid_argument, "max_iterations must be >= 1");
  for (double l : llrs)
    if (!std::isfinite(l)) throw Error(Errc::invalid_argument, "llrs must be finite");

  // Edge arrays: check-to-variable and variable-to-check messages.
  std::vector<std::size_t> row_offset(rows_.size() + 1, 0);
  for (std::size_t r = 0; r < rows_.size(); ++r)
    row_offset[r + 1] = row_offset[r] + rows_[r].size();
  const std::size_t n_edges = row_offset.back();
  std::vector<double> c2v(n_edges, 0.0);
  std::vector<double> v2c(n_edges, 0.0);

  DecodeResult res;
  res.codeword.assign(n_, 0);
  std::vector<double> posterior(n_, 0.0);
  constexpr double kMsgClip = 30.0;

  auto harden = [&] {
    for (std::size_t v = 0; v < n_; ++v) res.codeword[v] = posterior[v] < 0.0 ? 1 : 0;
  };

  for (std::size_t iter = 1; iter <= max_iterations; ++iter) {
    // Variable to check: channel LLR plus incoming check messages except
    // the edge being updated.
    std::vector<double> var_sum(llrs);
    for (std::size_t r = 0; r < rows_.size(); ++r)
      for (std::size_t e = row_offset[r]; e < row_offset[r + 1]; ++e)
        var_sum[rows_[r][e - row_offset[r]]] += c2v[e];
    for (std::size_t r = 0; r < rows_.size(); ++r)
      for (std::size_t e = row_offset[r]; e < row_offset[r + 1]; ++e)
        v2c[e] = var_sum[rows_[r][e - row_offset[r]]] - c2v[e];

    // Check to variable: tanh product rule.
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const std::size_t deg = rows_[r].size();
      double prod = 1.0;
      bool any_zero = false;
      std::size_t zero_at = 0;
      for (std::size_t k = 0; k < deg; ++k) {
        const double t = std::tanh(0.5 * std::clamp(v2c[row_offset[r] + k], -kMsgClip, kMsgClip));
        if (t == 0.0) {
          if (any_zero) {
            prod = 0.0;  // two zero factors: every extrinsic product is 0
          }
          any_zero = true;
          zero_at = k;
        } else {
          prod *= t;
        }
      }
      for (std::size_t k = 0; k < deg; ++k) {
        double extrinsic;
        if (any_zero) {
          extrinsic = (k == zero_at) ? prod : 0.0;
        } else {
          const double t =
              std::tanh(0.5 * std::clamp(v2c[row_offset[r] + k], -kMsgClip, kMsgClip));
          extrinsic = prod / t;
        }
        extrinsic = std::clamp(extrinsic, -0.9999999999, 0.9999999999);
        c2v[row_offset[r] + k] = 2.0 * std::atanh(extrinsic);
      }
    }

    for (std::size_t v = 0; v < n_; ++v) posterior[v] = llrs[v];
    for (std::size_t r = 0; r < rows_.size(); ++r)
      for (std::size_t e = row_offset[r]; e < row_offset[r + 1]; ++e)
        posterior[rows_[r][e - row_offset[r]]] += c2v[e];
    harden();
    res.iterations = iter;
    if (parity_ok(res.codeword)) {
      res.converged = true;
      break;
    }
  }
  if (!res.converged) {
    // Last hard decision stands; converged stays false unless parity holds.
    res.converged = parity_ok(res.codeword);
  }
  res.info_bits = extract_info(res.codeword);
  return res;
}

}  // namespace semcomm::classical
