#include "freechaos/words.hpp"

#include <numeric>
#include <stdexcept>

namespace freechaos {

bool ContractionWord::in_A() const {
    if (static_cast<int>(r.size()) != m - 1) return false;
    int ord = q;
    for (int rp : r) {
        if (rp < 0 || rp > q || rp > ord) return false;
        ord += q - 2 * rp;
    }
    return true;
}

bool ContractionWord::in_B() const {
    if (!in_A()) return false;
    const long total = std::accumulate(r.begin(), r.end(), 0L);
    return 2 * total == static_cast<long>(m) * q;
}

bool ContractionWord::in_D() const {
    if (q % 2 != 0) return false;
    if (!in_B()) return false;
    for (int rp : r)
        if (rp != 0 && rp != q / 2 && rp != q) return false;
    return true;
}

bool ContractionWord::in_E() const { return in_B() && !in_D(); }

std::vector<ContractionWord> enumerate_words(int q, int m, WordClass which) {
    if (q < 1 || m < 2) throw std::invalid_argument("enumerate_words: need q >= 1 and m >= 2");
    if ((which == WordClass::D || which == WordClass::E) && q % 2 != 0)
        throw std::invalid_argument("enumerate_words: D and E require even q");

    std::vector<ContractionWord> out;
    std::vector<int> r;
    auto keep = [&](int final_order) {
        if (which == WordClass::A) return true;
        ContractionWord w{q, m, r};
        if (final_order != 0) return false;
        if (which == WordClass::B) return true;
        if (which == WordClass::D) return w.in_D();
        return w.in_E();
    };
    auto dfs = [&](auto&& self, int step, int ord) -> void {
        if (step == m) {
            if (keep(ord)) out.push_back(ContractionWord{q, m, r});
            return;
        }
        const int folds_left = m - step - 1;
        for (int rp = 0; rp <= std::min(q, ord); ++rp) {
            const int next = ord + q - 2 * rp;
            if (which != WordClass::A && next > folds_left * q) continue; // cannot reach 0
            r.push_back(rp);
            self(self, step + 1, next);
            r.pop_back();
        }
    };
    dfs(dfs, 1, q);
    return out;
}

SetPartition word_to_partition(const ContractionWord& w) {
    if (!w.in_D()) throw std::invalid_argument("word_to_partition: word is not in D_m");
    const int half = w.q / 2;

    std::vector<std::vector<int>> closed;
    std::vector<std::vector<int>> stack{{1}};
    for (int j = 1; j < w.m; ++j) {
        const int rj = w.r[j - 1];
        if (rj == 0) {
            stack.push_back({j + 1});
        } else {
            if (stack.empty())
                throw std::logic_error("word_to_partition: stack underflow on D_m input");
            stack.back().push_back(j + 1);
            if (rj == w.q) {
                closed.push_back(std::move(stack.back()));
                stack.pop_back();
            } else if (rj != half) {
                throw std::logic_error("word_to_partition: alphabet violation on D_m input");
            }
        }
    }
    if (!stack.empty())
        throw std::logic_error("word_to_partition: unclosed blocks on D_m input");
    return make_partition(w.m, std::move(closed));
}

ContractionWord partition_to_word(const SetPartition& p, int q) {
    if (q < 2 || q % 2 != 0)
        throw std::invalid_argument("partition_to_word: q must be even and >= 2");
    if (p.n < 2) throw std::invalid_argument("partition_to_word: need n >= 2");
    if (p.has_singleton())
        throw std::invalid_argument("partition_to_word: partition has a singleton block");
    if (!is_noncrossing(p)) throw std::invalid_argument("partition_to_word: partition crosses");

    ContractionWord w{q, p.n, std::vector<int>(p.n - 1, 0)};
    for (const auto& block : p.blocks) {
        for (std::size_t k = 1; k < block.size(); ++k)
            w.r[block[k] - 2] = (k + 1 == block.size()) ? q : q / 2;
    }
    return w;
}

} // namespace freechaos
