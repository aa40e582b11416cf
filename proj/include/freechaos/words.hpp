#pragma once

#include <vector>

#include "freechaos/partitions.hpp"

namespace freechaos {

// Iterated arc-contraction prescription for m kernels of common order q:
// step p contracts the running kernel with kernel p+1 at index r[p-1].
struct ContractionWord {
    int q = 0;
    int m = 0;
    std::vector<int> r; // length m-1, entries in {0..q}

    bool in_A() const; // every step keeps 0 <= r_p <= min(q, running order)
    bool in_B() const; // in_A and 2*sum(r) == m*q (scalar outcome)
    bool in_D() const; // in_B with alphabet {0, q/2, q}; q must be even
    bool in_E() const; // in_B and not in_D
};

enum class WordClass { A, B, D, E };

std::vector<ContractionWord> enumerate_words(int q, int m, WordClass which);

// Stack bijection between D_m and NC_{>=2}(m):
// r = 0 opens a block, r = q/2 extends the top open block, r = q closes it.
SetPartition word_to_partition(const ContractionWord& w);

// Inverse assignment: position j > 1 contributes r_{j-1} = 0 if j is its
// block's least element, q if it is the largest, q/2 otherwise.
ContractionWord partition_to_word(const SetPartition& p, int q);

} // namespace freechaos
