#include "qtanner/gf2.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace qtanner {

namespace {

std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

}  // namespace

// ---------------------------------------------------------------- BitVector

BitVector::BitVector(std::size_t size) : size_(size), words_(words_for(size), 0) {}

BitVector BitVector::from_bits(const std::vector<int>& bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != 0 && bits[i] != 1) throw std::invalid_argument("bit values must be 0 or 1");
        if (bits[i]) v.set(i);
    }
    return v;
}

BitVector BitVector::from_support(std::size_t size, const std::vector<std::size_t>& support) {
    BitVector v(size);
    for (auto i : support) {
        if (i >= size) throw std::out_of_range("support index out of range");
        v.flip(i);
    }
    return v;
}

void BitVector::set(std::size_t i, bool value) {
    const Word mask = Word{1} << (i % kWordBits);
    if (value)
        words_[i / kWordBits] |= mask;
    else
        words_[i / kWordBits] &= ~mask;
}

void BitVector::clear() { std::fill(words_.begin(), words_.end(), 0); }

std::size_t BitVector::weight() const {
    std::size_t w = 0;
    for (auto x : words_) w += static_cast<std::size_t>(std::popcount(x));
    return w;
}

bool BitVector::any() const {
    return std::any_of(words_.begin(), words_.end(), [](Word x) { return x != 0; });
}

bool BitVector::dot(const BitVector& other) const {
    if (other.size_ != size_) throw std::invalid_argument("dot: size mismatch");
    Word acc = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) acc ^= words_[i] & other.words_[i];
    return std::popcount(acc) & 1;
}

std::vector<std::size_t> BitVector::support() const {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        Word x = words_[w];
        while (x) {
            out.push_back(w * kWordBits + static_cast<std::size_t>(std::countr_zero(x)));
            x &= x - 1;
        }
    }
    return out;
}

BitVector& BitVector::operator^=(const BitVector& other) {
    if (other.size_ != size_) throw std::invalid_argument("xor: size mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    return *this;
}

std::string BitVector::to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

// ------------------------------------------------------------- BinaryMatrix

BinaryMatrix::BinaryMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_(words_for(cols)), data_(rows * words_for(cols), 0) {}

BinaryMatrix::BinaryMatrix(std::initializer_list<std::initializer_list<int>> rows) {
    std::vector<std::vector<int>> tmp;
    for (const auto& r : rows) tmp.emplace_back(r);
    *this = from_rows(tmp, tmp.empty() ? 0 : tmp.front().size());
}

BinaryMatrix BinaryMatrix::identity(std::size_t n) {
    BinaryMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
}

BinaryMatrix BinaryMatrix::from_rows(const std::vector<std::vector<int>>& rows, std::size_t cols) {
    BinaryMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw std::invalid_argument("ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c) {
            const int v = rows[r][c];
            if (v != 0 && v != 1) throw std::invalid_argument("matrix entries must be 0 or 1");
            if (v) m.set(r, c);
        }
    }
    return m;
}

BinaryMatrix BinaryMatrix::from_row_vectors(const std::vector<BitVector>& rows, std::size_t cols) {
    BinaryMatrix m(0, cols);
    for (const auto& v : rows) m.append_row(v);
    return m;
}

void BinaryMatrix::set(std::size_t r, std::size_t c, bool value) {
    const Word mask = Word{1} << (c % 64);
    Word& w = data_[r * stride_ + c / 64];
    if (value)
        w |= mask;
    else
        w &= ~mask;
}

BitVector BinaryMatrix::row(std::size_t r) const {
    BitVector v(cols_);
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(r * stride_), stride_, v.words().begin());
    return v;
}

BitVector BinaryMatrix::column(std::size_t c) const {
    BitVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        if (get(r, c)) v.set(r);
    return v;
}

void BinaryMatrix::set_row(std::size_t r, const BitVector& v) {
    if (v.size() != cols_) throw std::invalid_argument("set_row: size mismatch");
    std::copy(v.words().begin(), v.words().end(), data_.begin() + static_cast<std::ptrdiff_t>(r * stride_));
}

void BinaryMatrix::append_row(const BitVector& v) {
    if (v.size() != cols_) throw std::invalid_argument("append_row: size mismatch");
    data_.insert(data_.end(), v.words().begin(), v.words().end());
    ++rows_;
}

void BinaryMatrix::xor_row_into(std::size_t src, std::size_t dst) {
    const Word* s = data_.data() + src * stride_;
    Word* d = data_.data() + dst * stride_;
    for (std::size_t i = 0; i < stride_; ++i) d[i] ^= s[i];
}

void BinaryMatrix::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap_ranges(data_.begin() + static_cast<std::ptrdiff_t>(a * stride_),
                     data_.begin() + static_cast<std::ptrdiff_t>((a + 1) * stride_),
                     data_.begin() + static_cast<std::ptrdiff_t>(b * stride_));
}

std::size_t BinaryMatrix::row_weight(std::size_t r) const {
    std::size_t w = 0;
    for (auto x : row_words(r)) w += static_cast<std::size_t>(std::popcount(x));
    return w;
}

std::size_t BinaryMatrix::column_weight(std::size_t c) const {
    std::size_t w = 0;
    for (std::size_t r = 0; r < rows_; ++r) w += get(r, c);
    return w;
}

std::vector<std::size_t> BinaryMatrix::row_support(std::size_t r) const { return row(r).support(); }

std::size_t BinaryMatrix::count_ones() const {
    std::size_t w = 0;
    for (auto x : data_) w += static_cast<std::size_t>(std::popcount(x));
    return w;
}

bool BinaryMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](Word x) { return x == 0; });
}

BinaryMatrix BinaryMatrix::transpose() const {
    BinaryMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (auto c : row_support(r)) t.set(c, r);
    return t;
}

BinaryMatrix BinaryMatrix::multiply(const BinaryMatrix& other) const {
    if (cols_ != other.rows_) throw std::invalid_argument("multiply: inner dimension mismatch");
    BinaryMatrix out(rows_, other.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        Word* dst = out.data_.data() + r * out.stride_;
        for (auto k : row_support(r)) {
            const Word* src = other.data_.data() + k * other.stride_;
            for (std::size_t i = 0; i < out.stride_; ++i) dst[i] ^= src[i];
        }
    }
    return out;
}

BinaryMatrix BinaryMatrix::multiply_transpose(const BinaryMatrix& other) const {
    if (cols_ != other.cols_) throw std::invalid_argument("multiply_transpose: column mismatch");
    BinaryMatrix out(rows_, other.rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        const Word* a = data_.data() + r * stride_;
        for (std::size_t s = 0; s < other.rows_; ++s) {
            const Word* b = other.data_.data() + s * stride_;
            Word acc = 0;
            for (std::size_t i = 0; i < stride_; ++i) acc ^= a[i] & b[i];
            if (std::popcount(acc) & 1) out.set(r, s);
        }
    }
    return out;
}

BitVector BinaryMatrix::multiply(const BitVector& v) const {
    if (v.size() != cols_) throw std::invalid_argument("multiply: vector size mismatch");
    BitVector out(rows_);
    auto vw = v.words();
    for (std::size_t r = 0; r < rows_; ++r) {
        const Word* a = data_.data() + r * stride_;
        Word acc = 0;
        for (std::size_t i = 0; i < stride_; ++i) acc ^= a[i] & vw[i];
        if (std::popcount(acc) & 1) out.set(r);
    }
    return out;
}

BinaryMatrix BinaryMatrix::select_columns(std::span<const std::size_t> cols) const {
    BinaryMatrix out(rows_, cols.size());
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t j = 0; j < cols.size(); ++j)
            if (get(r, cols[j])) out.set(r, j);
    return out;
}

BinaryMatrix BinaryMatrix::select_rows(std::span<const std::size_t> rows) const {
    BinaryMatrix out(rows.size(), cols_);
    for (std::size_t j = 0; j < rows.size(); ++j)
        std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(rows[j] * stride_), stride_,
                    out.data_.begin() + static_cast<std::ptrdiff_t>(j * stride_));
    return out;
}

BinaryMatrix BinaryMatrix::vstack(const BinaryMatrix& top, const BinaryMatrix& bottom) {
    if (top.cols_ != bottom.cols_) throw std::invalid_argument("vstack: column mismatch");
    BinaryMatrix out = top;
    out.data_.insert(out.data_.end(), bottom.data_.begin(), bottom.data_.end());
    out.rows_ += bottom.rows_;
    return out;
}

// --------------------------------------------------------------------- gf2

namespace gf2 {

namespace {

/// In-place elimination; returns pivot columns. When `full` is false only rows
/// below the pivot are cleared (enough for rank).
std::vector<std::size_t> eliminate(BinaryMatrix& m, bool full) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        const std::size_t w = c / 64;
        const BinaryMatrix::Word mask = BinaryMatrix::Word{1} << (c % 64);
        std::size_t p = r;
        while (p < m.rows() && !(m.row_words(p)[w] & mask)) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(p, r);
        for (std::size_t i = full ? 0 : r + 1; i < m.rows(); ++i)
            if (i != r && (m.row_words(i)[w] & mask)) m.xor_row_into(r, i);
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

std::size_t rank(const BinaryMatrix& m) {
    BinaryMatrix work = m;
    return eliminate(work, false).size();
}

RrefResult rref(const BinaryMatrix& m) {
    RrefResult out{m, {}};
    out.pivot_cols = eliminate(out.reduced, true);
    return out;
}

BinaryMatrix kernel_basis(const BinaryMatrix& m) {
    auto [reduced, pivots] = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    BinaryMatrix basis(0, m.cols());
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        BitVector v(m.cols());
        v.set(f);
        for (std::size_t i = 0; i < pivots.size(); ++i)
            if (reduced.get(i, f)) v.set(pivots[i]);
        basis.append_row(v);
    }
    return basis;
}

BitVector solve_submatrix(const BinaryMatrix& m, std::span<const std::size_t> col_subset,
                          const BitVector& s) {
    if (s.size() != m.rows()) throw std::invalid_argument("solve_submatrix: syndrome length mismatch");
    for (auto c : col_subset)
        if (c >= m.cols()) throw std::out_of_range("solve_submatrix: column out of range");
    // Augmented [m_I | s].
    const std::size_t k = col_subset.size();
    BinaryMatrix aug(m.rows(), k + 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t j = 0; j < k; ++j)
            if (m.get(r, col_subset[j])) aug.set(r, j);
        if (s.get(r)) aug.set(r, k);
    }
    auto pivots = eliminate(aug, true);
    if (!pivots.empty() && pivots.back() == k) throw std::domain_error("solve_submatrix: inconsistent syndrome");
    if (pivots.size() != k) throw std::invalid_argument("solve_submatrix: columns are linearly dependent");
    if (k != rank(m)) throw std::invalid_argument("solve_submatrix: subset size differs from rank");
    BitVector e(m.cols());
    for (std::size_t i = 0; i < k; ++i)
        if (aug.get(i, k)) e.set(col_subset[pivots[i]]);
    return e;
}

BinaryMatrix kron(const BinaryMatrix& a, const BinaryMatrix& b) {
    BinaryMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (!a.get(i, j)) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    if (b.get(k, l)) out.set(i * b.rows() + k, j * b.cols() + l);
        }
    return out;
}

bool in_row_space(const BinaryMatrix& m, const BitVector& v) {
    if (v.size() != m.cols()) throw std::invalid_argument("in_row_space: size mismatch");
    if (!v.any()) return true;
    BinaryMatrix ext = m;
    ext.append_row(v);
    return rank(ext) == rank(m);
}

bool same_row_space(const BinaryMatrix& a, const BinaryMatrix& b) {
    if (a.cols() != b.cols()) return false;
    const auto ra = rank(a);
    return ra == rank(b) && rank(BinaryMatrix::vstack(a, b)) == ra;
}

BinaryMatrix inverse(const BinaryMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse: matrix is not square");
    const std::size_t n = m.rows();
    BinaryMatrix aug(n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (auto c : m.row_support(r)) aug.set(r, c);
        aug.set(r, n + r);
    }
    auto pivots = eliminate(aug, true);
    if (pivots.size() < n || pivots[n - 1] != n - 1) throw std::domain_error("inverse: matrix is singular");
    BinaryMatrix inv(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (aug.get(r, n + c)) inv.set(r, c);
    return inv;
}

BinaryMatrix independent_rows(const BinaryMatrix& m) {
    BinaryMatrix basis(0, m.cols());
    BinaryMatrix echelon(0, m.cols());
    std::vector<std::size_t> lead;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        BitVector v = m.row(r);
        for (std::size_t i = 0; i < lead.size(); ++i)
            if (v.get(lead[i])) v ^= echelon.row(i);
        if (!v.any()) continue;
        lead.push_back(v.support().front());
        echelon.append_row(v);
        basis.append_row(m.row(r));
    }
    return basis;
}

}  // namespace gf2
}  // namespace qtanner
