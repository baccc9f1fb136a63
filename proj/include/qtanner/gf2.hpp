#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace qtanner {

/// Packed bit vector over GF(2). Bits past size() in the last word are always zero.
class BitVector {
public:
    using Word = std::uint64_t;
    static constexpr std::size_t kWordBits = 64;

    BitVector() = default;
    explicit BitVector(std::size_t size);
    static BitVector from_bits(const std::vector<int>& bits);
    static BitVector from_support(std::size_t size, const std::vector<std::size_t>& support);

    std::size_t size() const { return size_; }
    bool get(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
    void set(std::size_t i, bool value = true);
    void flip(std::size_t i) { words_[i / kWordBits] ^= Word{1} << (i % kWordBits); }
    void clear();

    std::size_t weight() const;
    bool any() const;
    bool dot(const BitVector& other) const;
    std::vector<std::size_t> support() const;

    BitVector& operator^=(const BitVector& other);
    friend BitVector operator^(BitVector lhs, const BitVector& rhs) { return lhs ^= rhs; }
    friend bool operator==(const BitVector& a, const BitVector& b) = default;

    std::span<Word> words() { return words_; }
    std::span<const Word> words() const { return words_; }

    std::string to_string() const;

private:
    std::size_t size_ = 0;
    std::vector<Word> words_;
};

/// Dense row-major bit matrix over GF(2), rows packed into 64-bit words.
class BinaryMatrix {
public:
    using Word = BitVector::Word;

    BinaryMatrix() = default;
    BinaryMatrix(std::size_t rows, std::size_t cols);
    BinaryMatrix(std::initializer_list<std::initializer_list<int>> rows);

    static BinaryMatrix identity(std::size_t n);
    static BinaryMatrix from_rows(const std::vector<std::vector<int>>& rows, std::size_t cols);
    static BinaryMatrix from_row_vectors(const std::vector<BitVector>& rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t words_per_row() const { return stride_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    bool get(std::size_t r, std::size_t c) const {
        return (data_[r * stride_ + c / 64] >> (c % 64)) & 1U;
    }
    void set(std::size_t r, std::size_t c, bool value = true);
    void flip(std::size_t r, std::size_t c) { data_[r * stride_ + c / 64] ^= Word{1} << (c % 64); }

    std::span<Word> row_words(std::size_t r) { return {data_.data() + r * stride_, stride_}; }
    std::span<const Word> row_words(std::size_t r) const { return {data_.data() + r * stride_, stride_}; }

    BitVector row(std::size_t r) const;
    BitVector column(std::size_t c) const;
    void set_row(std::size_t r, const BitVector& v);
    void append_row(const BitVector& v);
    void xor_row_into(std::size_t src, std::size_t dst);
    void swap_rows(std::size_t a, std::size_t b);

    std::size_t row_weight(std::size_t r) const;
    std::size_t column_weight(std::size_t c) const;
    std::vector<std::size_t> row_support(std::size_t r) const;
    std::size_t count_ones() const;
    bool is_zero() const;

    BinaryMatrix transpose() const;
    /// this * other over GF(2).
    BinaryMatrix multiply(const BinaryMatrix& other) const;
    /// this * other^T over GF(2); both operands share the column space.
    BinaryMatrix multiply_transpose(const BinaryMatrix& other) const;
    /// this * v over GF(2).
    BitVector multiply(const BitVector& v) const;

    BinaryMatrix select_columns(std::span<const std::size_t> cols) const;
    BinaryMatrix select_rows(std::span<const std::size_t> rows) const;
    static BinaryMatrix vstack(const BinaryMatrix& top, const BinaryMatrix& bottom);

    friend bool operator==(const BinaryMatrix& a, const BinaryMatrix& b) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t stride_ = 0;
    std::vector<Word> data_;
};

namespace gf2 {

struct RrefResult {
    BinaryMatrix reduced;
    std::vector<std::size_t> pivot_cols;
};

std::size_t rank(const BinaryMatrix& m);

/// Reduced row echelon form. Pivot search scans columns left to right and
/// takes the lowest-index row holding a one, so the result is reproducible.
RrefResult rref(const BinaryMatrix& m);

/// Rows form a basis of {x : m x = 0}; one row per non-pivot column.
BinaryMatrix kernel_basis(const BinaryMatrix& m);

/// Returns the unique e supported on `col_subset` with m e = s.
/// Throws std::invalid_argument if the chosen columns are dependent or fewer
/// than rank(m), and std::domain_error if s is outside the column space.
BitVector solve_submatrix(const BinaryMatrix& m, std::span<const std::size_t> col_subset,
                          const BitVector& s);

/// Kronecker product; column (i, j) maps to i * b.cols() + j.
BinaryMatrix kron(const BinaryMatrix& a, const BinaryMatrix& b);

/// True when v lies in the row space of m.
bool in_row_space(const BinaryMatrix& m, const BitVector& v);

/// True when the row spaces of a and b coincide.
bool same_row_space(const BinaryMatrix& a, const BinaryMatrix& b);

/// Inverse of a square matrix; throws std::domain_error when singular.
BinaryMatrix inverse(const BinaryMatrix& m);

/// Keeps a maximal independent subset of rows (first occurrences win).
BinaryMatrix independent_rows(const BinaryMatrix& m);

}  // namespace gf2
}  // namespace qtanner
