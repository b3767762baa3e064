/*
 * Copyright 2026 The dualpolar Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace dualpolar {

using Word = std::uint64_t;

inline std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

// Views over packed bit rows. All rows in one BitMatrix share a word count.
inline bool test_bit(std::span<const Word> w, std::size_t i) { return (w[i >> 6] >> (i & 63)) & 1u; }
inline void set_bit(std::span<Word> w, std::size_t i) { w[i >> 6] |= Word(1) << (i & 63); }
inline void clear_bit(std::span<Word> w, std::size_t i) { w[i >> 6] &= ~(Word(1) << (i & 63)); }

inline std::size_t popcount(std::span<const Word> a) {
    std::size_t c = 0;
    for (Word x : a) c += static_cast<std::size_t>(std::popcount(x));
    return c;
}

inline std::size_t and_count(std::span<const Word> a, std::span<const Word> b) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < a.size(); ++i) c += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
    return c;
}

inline std::size_t and3_count(std::span<const Word> a, std::span<const Word> b, std::span<const Word> c) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) n += static_cast<std::size_t>(std::popcount(a[i] & b[i] & c[i]));
    return n;
}

template <class F>
void for_each_bit(std::span<const Word> w, F&& f) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        Word x = w[i];
        while (x) {
            const int b = std::countr_zero(x);
            f(i * 64 + static_cast<std::size_t>(b));
            x &= x - 1;
        }
    }
}

class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t n) : n_(n), w_(words_for(n), 0) {}

    std::size_t size() const { return n_; }
    bool test(std::size_t i) const { return test_bit(w_, i); }
    void set(std::size_t i) { set_bit(w_, i); }
    void reset(std::size_t i) { clear_bit(w_, i); }
    std::size_t count() const { return popcount(w_); }
    std::span<const Word> words() const { return w_; }
    std::span<Word> words() { return w_; }

    bool operator==(const Bitset&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<Word> w_;
};

class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), stride_(words_for(cols)), w_(rows * stride_, 0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t stride() const { return stride_; }
    std::span<const Word> row(std::size_t i) const { return {w_.data() + i * stride_, stride_}; }
    std::span<Word> row(std::size_t i) { return {w_.data() + i * stride_, stride_}; }
    bool test(std::size_t i, std::size_t j) const { return test_bit(row(i), j); }
    void set(std::size_t i, std::size_t j) { set_bit(row(i), j); }

private:
    std::size_t rows_ = 0, cols_ = 0, stride_ = 0;
    std::vector<Word> w_;
};

}  // namespace dualpolar
