#include "freechaos/partitions.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace freechaos {

std::vector<int> SetPartition::block_of() const {
    std::vector<int> owner(n + 1, -1);
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (int e : blocks[b]) owner[e] = static_cast<int>(b);
    return owner;
}

bool SetPartition::has_singleton() const {
    return std::any_of(blocks.begin(), blocks.end(),
                       [](const auto& b) { return b.size() == 1; });
}

SetPartition make_partition(int n, std::vector<std::vector<int>> blocks) {
    if (n < 0) throw std::invalid_argument("make_partition: n must be >= 0");
    std::vector<bool> seen(n + 1, false);
    for (auto& b : blocks) {
        if (b.empty()) throw std::invalid_argument("make_partition: empty block");
        std::sort(b.begin(), b.end());
        for (int e : b) {
            if (e < 1 || e > n) throw std::invalid_argument("make_partition: element out of range");
            if (seen[e]) throw std::invalid_argument("make_partition: repeated element");
            seen[e] = true;
        }
    }
    for (int e = 1; e <= n; ++e)
        if (!seen[e]) throw std::invalid_argument("make_partition: blocks do not cover {1..n}");
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return SetPartition{n, std::move(blocks)};
}

bool operator==(const SetPartition& a, const SetPartition& b) {
    return a.n == b.n && a.blocks == b.blocks;
}

bool is_noncrossing(const SetPartition& p) {
    const auto owner = p.block_of();
    std::vector<int> last(p.blocks.size(), 0);
    for (int i = 1; i <= p.n; ++i) last[owner[i]] = i;

    std::vector<int> stack;
    std::vector<bool> open(p.blocks.size(), false);
    for (int i = 1; i <= p.n; ++i) {
        const int b = owner[i];
        if (open[b]) {
            if (stack.empty() || stack.back() != b) return false;
        } else {
            open[b] = true;
            stack.push_back(b);
        }
        while (!stack.empty() && last[stack.back()] == i) stack.pop_back();
    }
    return true;
}

bool leq_refinement(const SetPartition& p, const SetPartition& s) {
    if (p.n != s.n) throw std::invalid_argument("leq_refinement: ground-set size mismatch");
    const auto owner_s = s.block_of();
    for (const auto& block : p.blocks) {
        const int target = owner_s[block.front()];
        for (int e : block)
            if (owner_s[e] != target) return false;
    }
    return true;
}

SetPartition kernel_partition(const std::vector<int>& chi) {
    const int n = static_cast<int>(chi.size());
    std::vector<std::vector<int>> blocks;
    std::vector<int> labels;
    for (int i = 0; i < n; ++i) {
        auto it = std::find(labels.begin(), labels.end(), chi[i]);
        if (it == labels.end()) {
            labels.push_back(chi[i]);
            blocks.push_back({i + 1});
        } else {
            blocks[it - labels.begin()].push_back(i + 1);
        }
    }
    return make_partition(n, std::move(blocks));
}

std::vector<SetPartition> enumerate_set_partitions(int n) {
    if (n < 0) throw std::invalid_argument("enumerate_set_partitions: n must be >= 0");
    std::vector<SetPartition> out;
    if (n == 0) {
        out.push_back(SetPartition{0, {}});
        return out;
    }
    // restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[0..i-1])
    std::vector<int> a(n, 0);
    while (true) {
        int nblocks = *std::max_element(a.begin(), a.end()) + 1;
        std::vector<std::vector<int>> blocks(nblocks);
        for (int i = 0; i < n; ++i) blocks[a[i]].push_back(i + 1);
        out.push_back(SetPartition{n, std::move(blocks)});

        int i = n - 1;
        while (i > 0) {
            int cap = 0;
            for (int j = 0; j < i; ++j) cap = std::max(cap, a[j]);
            if (a[i] <= cap) break;
            --i;
        }
        if (i == 0) break;
        ++a[i];
        std::fill(a.begin() + i + 1, a.end(), 0);
    }
    return out;
}

std::vector<SetPartition> enumerate_nc(int n) {
    std::vector<SetPartition> out;
    for (auto& p : enumerate_set_partitions(n))
        if (is_noncrossing(p)) out.push_back(std::move(p));
    return out;
}

std::vector<SetPartition> enumerate_nc2(int n) {
    std::vector<SetPartition> out;
    for (auto& p : enumerate_set_partitions(n)) {
        bool pairs = std::all_of(p.blocks.begin(), p.blocks.end(),
                                 [](const auto& b) { return b.size() == 2; });
        if (pairs && is_noncrossing(p)) out.push_back(std::move(p));
    }
    return out;
}

std::vector<SetPartition> enumerate_nc_ge2(int n) {
    std::vector<SetPartition> out;
    for (auto& p : enumerate_set_partitions(n))
        if (!p.has_singleton() && is_noncrossing(p)) out.push_back(std::move(p));
    return out;
}

long count_R(int m, int j) {
    if (m < 2 || j < 1) throw std::invalid_argument("count_R: need m >= 2 and j >= 1");
    long count = 0;
    for (const auto& p : enumerate_nc_ge2(m))
        if (static_cast<int>(p.block_count()) == j) ++count;
    return count;
}

std::uint64_t catalan_number(int n) {
    if (n < 0) throw std::invalid_argument("catalan_number: n must be >= 0");
    std::uint64_t c = 1;
    for (int i = 0; i < n; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
    return c;
}

std::string format_partition(const SetPartition& p) {
    std::ostringstream os;
    for (std::size_t b = 0; b < p.blocks.size(); ++b) {
        if (b) os << '|';
        for (std::size_t e = 0; e < p.blocks[b].size(); ++e) {
            if (e) os << ',';
            os << p.blocks[b][e];
        }
    }
    return os.str();
}

SetPartition parse_partition(const std::string& text) {
    std::vector<std::vector<int>> blocks;
    int n = 0;
    std::istringstream blocks_in(text);
    std::string block_text;
    while (std::getline(blocks_in, block_text, '|')) {
        std::vector<int> block;
        std::istringstream elems_in(block_text);
        std::string elem;
        while (std::getline(elems_in, elem, ',')) {
            std::size_t pos = 0;
            int value;
            try {
                value = std::stoi(elem, &pos);
            } catch (const std::exception&) {
                throw std::invalid_argument("parse_partition: bad element '" + elem + "'");
            }
            if (pos != elem.size())
                throw std::invalid_argument("parse_partition: bad element '" + elem + "'");
            block.push_back(value);
            n = std::max(n, value);
        }
        if (block.empty()) throw std::invalid_argument("parse_partition: empty block");
        blocks.push_back(std::move(block));
    }
    return make_partition(n, std::move(blocks));
}

} // namespace freechaos
