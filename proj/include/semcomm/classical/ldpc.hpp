// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semcomm/classical/bitstream.hpp"

namespace semcomm::classical {

// Binary LDPC code defined by a user-supplied parity-check matrix in alist
// format. Encoding goes through a systematic form derived by Gaussian
// elimination; decoding is sum-product belief propagation on the original
// (possibly redundant) check set.
class LdpcCode {
 public:
  static LdpcCode from_alist_file(const std::string& path);
  static LdpcCode from_rows(std::size_t n, const std::vector<std::vector<std::size_t>>& rows);

  std::size_t block_length() const { return n_; }
  std::size_t info_length() const { return n_ - rank_; }
  std::size_t rank() const { return rank_; }
  std::size_t check_count() const { return rows_.size(); }

  BitStream encode(const BitStream& info_bits) const;

  struct DecodeResult {
    BitStream codeword;
    BitStream info_bits;
    bool converged = false;  // true iff H * codeword == 0
    std::size_t iterations = 0;
  };
  // llrs: log(P(bit=0)/P(bit=1)) per code bit.
  DecodeResult decode(const std::vector<double>& llrs, std::size_t max_iterations = 25) const;

  bool parity_ok(const BitStream& codeword) const;
  BitStream extract_info(const BitStream& codeword) const;

 private:
  LdpcCode() = default;
  void prepare();

  std::size_t n_ = 0;
  std::size_t rank_ = 0;
  std::vector<std::vector<std::size_t>> rows_;  // column indices per check
  // Reduced row-echelon description used by the systematic encoder.
  std::vector<std::vector<std::size_t>> rref_rows_;
  std::vector<std::size_t> pivot_cols_;  // one per rref row
  std::vector<std::size_t> info_cols_;   // the non-pivot columns
};

}  // namespace semcomm::classical
