#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace freechaos {

// Set partition of {1..n}; blocks ordered by least element, elements ascending.
struct SetPartition {
    int n = 0;
    std::vector<std::vector<int>> blocks;

    std::size_t block_count() const { return blocks.size(); }
    // block id (0-based) of each position 1..n
    std::vector<int> block_of() const;
    bool has_singleton() const;
};

SetPartition make_partition(int n, std::vector<std::vector<int>> blocks);

bool operator==(const SetPartition& a, const SetPartition& b);

// Stack scan over block labels; false iff two blocks interleave.
bool is_noncrossing(const SetPartition& p);

// p <= s in the reversed refinement order: every block of s is a union of
// blocks of p.
bool leq_refinement(const SetPartition& p, const SetPartition& s);

// Partition of positions grouping equal labels of a label word chi (1-based
// positions; chi[k] is the label at position k+1).
SetPartition kernel_partition(const std::vector<int>& chi);

// Complete lists in restricted-growth-string order. n = 0 yields the single
// empty partition.
std::vector<SetPartition> enumerate_set_partitions(int n);
std::vector<SetPartition> enumerate_nc(int n);
std::vector<SetPartition> enumerate_nc2(int n);   // all blocks of size 2
std::vector<SetPartition> enumerate_nc_ge2(int n); // no singleton blocks

// Number of partitions in NC_{>=2}(m) with exactly j blocks.
long count_R(int m, int j);

std::uint64_t catalan_number(int n);

// Text format "1,5,6,9,10|2,3,4|7,8".
std::string format_partition(const SetPartition& p);
SetPartition parse_partition(const std::string& text);

} // namespace freechaos
