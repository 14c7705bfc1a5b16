// Class sizes, spanning-tree and Euler-circuit counts for a few small words.

#include <cmath>
#include <cstdio>
#include <string>

#include "dbent/dbent.hpp"

int main() {
    struct Case {
        const char* word;
        const char* alphabet;
        std::size_t k;
    };
    const Case cases[] = {{"ABRACADABRA", "ABCDR", 1}, {"ABRACADABRA", "ABCDR", 2}, {"BARBARA", "ABR", 1},
                          {"ATAGTC", "ACGT", 1},       {"AGTATC", "ACGT", 1}};
    std::printf("%-12s %2s %12s %12s %12s %14s\n", "word", "k", "W", "t", "c", "H (nats)");
    for (const auto& c : cases) {
        const auto alpha = dbent::Alphabet::from_chars(c.alphabet);
        const dbent::CyclicWord w(c.word, alpha);
        const auto q = dbent::build_quiver(w, c.k);
        const auto h = dbent::word_entropy(w, c.k);
        const auto scc = dbent::strongly_connected_components(q);
        std::string t = "-", circuits = "-";
        if (scc.count == 1) {
            const auto r = dbent::eulerian_entropy(q);
            t = std::to_string(dbent::snap_to_integer(r.log_spanning_trees).value_or(0));
            circuits = std::to_string(dbent::snap_to_integer(r.log_euler_circuits).value_or(0));
        }
        std::printf("%-12s %2zu %12llu %12s %12s %14.9f\n", c.word, c.k,
                    static_cast<unsigned long long>(dbent::snap_to_integer(h.nats).value_or(0)), t.c_str(),
                    circuits.c_str(), h.nats);
    }

    std::printf("\nABRACADABRA, k = 1 class (least rotations):\n");
    const auto alpha = dbent::Alphabet::from_chars("ABCDR");
    const auto cls = dbent::oracle::enumerate_class(dbent::CyclicWord("ABRACADABRA", alpha), 1);
    for (const auto& m : cls.members)
        std::printf("  %s\n", dbent::to_string(dbent::CyclicWord(m, alpha.size()), alpha).c_str());
    return 0;
}
