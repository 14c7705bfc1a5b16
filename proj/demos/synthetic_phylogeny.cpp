// Three random ancestors, four point-mutated descendants each, clustered by
// normalized order-3 relative entropy.

#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "dbent/dbent.hpp"

int main(int argc, char** argv) {
    const double rate = argc > 1 ? std::stod(argv[1]) : 0.05;
    const std::size_t length = argc > 2 ? std::stoul(argv[2]) : 600;
    std::mt19937_64 rng(20240601);
    const std::string acgt = "ACGT";
    const auto alpha = dbent::Alphabet::from_chars(dbent::io::dna_alphabet);

    std::vector<dbent::CyclicWord> words;
    std::vector<std::string> labels;
    for (int a = 0; a < 3; ++a) {
        const auto ancestor = dbent::synthetic::random_word(length, acgt, rng);
        for (int d = 0; d < 4; ++d) {
            words.emplace_back(dbent::synthetic::point_mutate(ancestor, rate, acgt, rng), alpha);
            labels.push_back("clade" + std::to_string(a) + "_" + std::to_string(d));
        }
    }
    auto dm = dbent::distance_matrix(words, 3, true);
    dm.labels = labels;
    const auto tree = dbent::linkage(dm, dbent::LinkageMethod::average);
    std::cout << dbent::io::write_distance_csv(dm) << '\n' << dbent::newick_export(tree, labels) << '\n';
    return 0;
}
