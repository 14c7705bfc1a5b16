// Command-line front end for de Bruijn entropy, relative entropy and the
// similarity pipeline.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dbent/dbent.hpp"

namespace {

using namespace dbent;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return io::read_all(in);
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

std::string fmt(double x) { return dbent::detail::format_number(x); }

bool looks_like_fasta(const std::string& text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '>';
    }
    return false;
}

/// "3", "auto", "auto:informative", "auto:linear-time".
std::size_t resolve_k(const std::string& spec, std::size_t min_length, std::size_t n, double omega) {
    if (spec == "auto" || spec == "auto:informative") return suggest_k(min_length, n, KMode::informative);
    if (spec == "auto:linear-time") return suggest_k(min_length, n, KMode::linear_time, omega);
    std::size_t pos = 0;
    long long k = 0;
    try {
        k = std::stoll(spec, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != spec.size() || k < 1) throw std::invalid_argument("--k must be a positive integer or auto[:informative|:linear-time]");
    return static_cast<std::size_t>(k);
}

std::optional<double> resolve_base(const std::string& spec, std::size_t n) {
    if (spec.empty()) return std::nullopt;
    if (spec == "n") return static_cast<double>(n);
    if (spec == "e") return std::exp(1.0);
    double b = 0.0;
    try {
        b = std::stod(spec);
    } catch (const std::exception&) {
        throw std::invalid_argument("--base must be n, e or a positive number");
    }
    if (!(b > 0.0) || b == 1.0) throw std::invalid_argument("--base must be positive and not 1");
    return b;
}

void print_entropy(const std::string& prefix, const EntropyValue& h, std::optional<double> base) {
    std::cout << prefix << "H_nats=" << fmt(h.nats) << '\n';
    if (base) std::cout << prefix << "H_base_" << fmt(*base) << '=' << fmt(h.in_base(*base)) << '\n';
    if (auto w = snap_to_integer(h.nats)) std::cout << prefix << "W=" << *w << '\n';
}

struct Corpus {
    std::vector<std::string> labels;
    std::vector<CyclicWord> words;
    std::size_t min_length = 0;
};

Corpus load_fasta_corpus(const std::string& text, const Alphabet& alphabet) {
    Corpus c;
    for (auto& r : io::parse_fasta(text)) {
        c.labels.push_back(io::species_label(r.description));
        c.words.emplace_back(r.sequence, alphabet);
        c.min_length = c.min_length ? std::min(c.min_length, r.sequence.size()) : r.sequence.size();
    }
    return c;
}

std::string table_csv(std::uint64_t ell, bool log_values) {
    std::ostringstream out;
    out << "xstar\\x00";
    for (std::uint64_t x = 0; x <= ell; ++x) out << ',' << x;
    out << '\n';
    for (std::uint64_t xs = 0; 2 * xs <= ell; ++xs) {
        out << xs;
        for (std::uint64_t x00 = 0; x00 <= ell; ++x00) {
            out << ',';
            const bool valid = xs == 0 ? (x00 == 0 || x00 == ell) : x00 + 2 * xs <= ell;
            if (!valid) continue;
            const double h = binary_W1_closed_form(x00, xs, ell);
            if (log_values)
                out << fmt(h);
            else if (auto w = snap_to_integer(h))
                out << *w;
            else
                out << fmt(std::exp(h));
        }
        out << '\n';
    }
    return out.str();
}

std::string relgrid_csv(std::uint64_t ell, std::uint64_t x00, std::uint64_t xstar) {
    if (xstar == 0 || x00 + 2 * xstar > ell) throw std::invalid_argument("--x00/--xstar do not describe a binary word of length --ell with x* >= 1");
    const std::uint64_t x11 = ell - x00 - 2 * xstar;
    const Quiver base = Quiver::from_matrix({{x00, xstar}, {xstar, x11}});
    std::ostringstream out;
    out << "x00p,xstarp,x11p,H1_nats,entry_sum,exceeds_ell\n";
    auto cell = [&](std::uint64_t a, std::uint64_t s) {
        const std::uint64_t b = ell - a - 2 * s;
        const Quiver other = Quiver::from_matrix({{a, s}, {s, b}});
        const Quiver diff = boxminus(base, other);
        const double h = componentwise_entropy(diff).nats;
        const auto sum = diff.entry_sum();
        out << a << ',' << s << ',' << b << ',' << fmt(h) << ',' << sum << ',' << (sum > ell ? 1 : 0) << '\n';
    };
    cell(0, 0);
    cell(ell, 0);
    for (std::uint64_t s = 1; 2 * s <= ell; ++s)
        for (std::uint64_t a = 0; a + 2 * s <= ell; ++a) cell(a, s);
    return out.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"de Bruijn entropy and string similarity"};
    app.require_subcommand(1);

    // entropy
    std::string e_input, e_k = "1", e_alpha, e_base;
    auto* entropy = app.add_subcommand("entropy", "order-k de Bruijn entropy of a word or of each FASTA record");
    entropy->add_option("input", e_input, "word, or path to a FASTA file")->required();
    entropy->add_option("--k", e_k, "order: integer or auto[:informative|:linear-time]");
    entropy->add_option("--alphabet", e_alpha, "alphabet symbols in order (default: sorted symbols of the word, ACGTN for FASTA)");
    entropy->add_option("--base", e_base, "also report in this base: n, e, 2 or any number");

    // relent
    std::string r_w1, r_w2, r_k = "1", r_alpha, r_base;
    auto* relent = app.add_subcommand("relent", "relative de Bruijn entropy of two words");
    relent->add_option("w1", r_w1)->required();
    relent->add_option("w2", r_w2)->required();
    relent->add_option("--k", r_k, "order: integer or auto[:informative|:linear-time]");
    relent->add_option("--alphabet", r_alpha, "alphabet symbols in order (default: sorted symbols of both words)");
    relent->add_option("--base", r_base, "also report in this base: n, e, 2 or any number");

    // matrix
    std::string m_fasta, m_k = "auto", m_alpha(io::dna_alphabet), m_out;
    bool m_norm = false;
    double omega = 3.0;
    unsigned threads = 0;
    auto* matrix = app.add_subcommand("matrix", "pairwise relative-entropy distance matrix of a FASTA corpus");
    matrix->add_option("fasta", m_fasta)->required();
    matrix->add_option("--k", m_k, "order: integer or auto[:informative|:linear-time]");
    matrix->add_option("--omega", omega, "matrix-multiplication exponent for auto:linear-time");
    matrix->add_flag("--normalize", m_norm, "divide by the entropy of the concatenated pair");
    matrix->add_option("--alphabet", m_alpha, "alphabet symbols");
    matrix->add_option("--threads", threads, "worker threads (0 = all cores)");
    matrix->add_option("--out", m_out, "output CSV (default stdout)");

    // tree
    std::string t_input, t_method = "average", t_taxa, t_out, t_k = "auto", t_alpha(io::dna_alphabet);
    std::size_t t_offset = 0;
    bool t_norm = false;
    auto* tree = app.add_subcommand("tree", "hierarchical clustering of a distance CSV or FASTA corpus, as Newick");
    tree->add_option("input", t_input, "distance CSV or FASTA file")->required();
    tree->add_option("--method", t_method, "single, average or complete")
        ->check(CLI::IsMember({"single", "average", "complete"}));
    tree->add_option("--taxa", t_taxa, "GenBank file whose ORGANISM lineages label the clades");
    tree->add_option("--taxa-offset", t_offset, "number of leading lineage ranks to drop");
    tree->add_option("--k", t_k, "order for FASTA input");
    tree->add_option("--omega", omega, "matrix-multiplication exponent for auto:linear-time");
    tree->add_flag("--normalize", t_norm, "normalized distances for FASTA input");
    tree->add_option("--alphabet", t_alpha, "alphabet symbols for FASTA input");
    tree->add_option("--threads", threads, "worker threads (0 = all cores)");
    tree->add_option("--out", t_out, "output Newick (default stdout)");

    // table
    std::uint64_t tb_ell = 16;
    bool tb_log = false;
    std::string tb_out;
    auto* table = app.add_subcommand("table", "binary order-1 class sizes W1 over (x*, x00) as CSV");
    table->add_option("--ell", tb_ell, "word length")->required()->check(CLI::PositiveNumber);
    table->add_flag("--log", tb_log, "emit H1 in nats instead of W1");
    table->add_option("--out", tb_out, "output CSV (default stdout)");

    // relgrid
    std::uint64_t rg_ell = 256, rg_x00 = 32, rg_xs = 80;
    std::string rg_out;
    auto* relgrid = app.add_subcommand("relgrid", "relative entropy of every binary word against a fixed one, as CSV");
    relgrid->add_option("--ell", rg_ell)->required()->check(CLI::PositiveNumber);
    relgrid->add_option("--x00", rg_x00)->required();
    relgrid->add_option("--xstar", rg_xs)->required();
    relgrid->add_option("--out", rg_out, "output CSV (default stdout)");

    // spin
    spin::SpinParams sp;
    std::string sp_conv = "unit", sp_count = "linear", sp_grid;
    auto* spin_cmd = app.add_subcommand("spin", "Ising ring partition function via the order-1 density of states");
    spin_cmd->add_option("--ell", sp.ell)->required();
    spin_cmd->add_option("--beta", sp.beta)->required();
    spin_cmd->add_option("--J", sp.J)->required();
    spin_cmd->add_option("--K", sp.K)->required();
    spin_cmd->add_option("--convention", sp_conv, "unit (-J s s' - K s) or doubled (-2J s s' - K s)")
        ->check(CLI::IsMember({"unit", "doubled"}));
    spin_cmd->add_option("--counting", sp_count, "linear (all 2^ell configurations) or cyclic (necklaces)")
        ->check(CLI::IsMember({"linear", "cyclic"}));
    spin_cmd->add_option("--grid", sp_grid, "also write the (x00, x*) grid as CSV to this path");

    // levenshtein
    std::string l_w1, l_w2;
    auto* lev = app.add_subcommand("levenshtein", "unit-cost edit distance");
    lev->add_option("w1", l_w1)->required();
    lev->add_option("w2", l_w2)->required();

    // oracle (debugging; hidden from help)
    std::string o_what, o_word, o_alpha;
    std::size_t o_k = 1;
    std::uint64_t o_n = 2, o_ell = 1;
    auto* orc = app.add_subcommand("oracle", "brute-force counts for small instances");
    orc->group("");
    orc->add_option("what", o_what, "class, circuits or necklaces")
        ->required()
        ->check(CLI::IsMember({"class", "circuits", "necklaces"}));
    orc->add_option("word", o_word);
    orc->add_option("--k", o_k);
    orc->add_option("--alphabet", o_alpha);
    orc->add_option("--n", o_n);
    orc->add_option("--ell", o_ell);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*entropy) {
            const bool is_file = std::filesystem::is_regular_file(e_input);
            if (is_file) {
                const Alphabet alpha = Alphabet::from_chars(e_alpha.empty() ? std::string(io::dna_alphabet) : e_alpha);
                const auto corpus = load_fasta_corpus(read_file(e_input), alpha);
                const auto base = resolve_base(e_base, alpha.size());
                const std::size_t k = resolve_k(e_k, corpus.min_length, alpha.size(), omega);
                std::vector<EntropyValue> hs;
                for (const auto& w : corpus.words) hs.push_back(word_entropy(w, k));
                std::cout << "k=" << k << '\n';
                for (std::size_t i = 0; i < hs.size(); ++i) {
                    std::cout << "record=" << corpus.labels[i] << '\n';
                    print_entropy("", hs[i], base);
                }
            } else {
                const Alphabet alpha = e_alpha.empty() ? Alphabet::inferred_from(e_input) : Alphabet::from_chars(e_alpha);
                const CyclicWord w(e_input, alpha);
                const std::size_t k = resolve_k(e_k, w.length(), alpha.size(), omega);
                const auto base = resolve_base(e_base, alpha.size());
                const auto h = word_entropy(w, k);
                std::cout << "k=" << k << '\n';
                print_entropy("", h, base);
            }
        } else if (*relent) {
            const Alphabet alpha =
                r_alpha.empty() ? Alphabet::inferred_from(r_w1 + r_w2) : Alphabet::from_chars(r_alpha);
            const CyclicWord a(r_w1, alpha), b(r_w2, alpha);
            const std::size_t k = resolve_k(r_k, std::min(a.length(), b.length()), alpha.size(), omega);
            const auto base = resolve_base(r_base, alpha.size());
            const auto h = relative_entropy(a, b, k);
            std::cout << "k=" << k << '\n';
            print_entropy("", h, base);
        } else if (*matrix) {
            const Alphabet alpha = Alphabet::from_chars(m_alpha);
            auto corpus = load_fasta_corpus(read_file(m_fasta), alpha);
            const std::size_t k = resolve_k(m_k, corpus.min_length, alpha.size(), omega);
            DistanceOptions opts;
            opts.threads = threads;
            auto dm = distance_matrix(corpus.words, k, m_norm, opts);
            dm.labels = corpus.labels;
            write_output(m_out, io::write_distance_csv(dm));
            if (!m_out.empty() && m_out != "-")
                std::cout << "wrote " << dm.size << "x" << dm.size << " matrix (k=" << k << ") to " << m_out << '\n';
        } else if (*tree) {
            const std::string text = read_file(t_input);
            DistanceMatrix dm;
            if (looks_like_fasta(text)) {
                const Alphabet alpha = Alphabet::from_chars(t_alpha);
                auto corpus = load_fasta_corpus(text, alpha);
                const std::size_t k = resolve_k(t_k, corpus.min_length, alpha.size(), omega);
                DistanceOptions opts;
                opts.threads = threads;
                dm = distance_matrix(corpus.words, k, t_norm, opts);
                dm.labels = corpus.labels;
            } else {
                dm = io::read_distance_csv(text);
            }
            const auto t = linkage(dm, parse_linkage_method(t_method));
            std::vector<std::string> internal;
            if (!t_taxa.empty()) {
                const auto lineages = io::parse_genbank_lineages(read_file(t_taxa), t_offset);
                for (const auto& c : annotate_clades(t, lineages)) internal.push_back(c.label);
            }
            write_output(t_out, newick_export(t, dm.labels, internal) + "\n");
        } else if (*table) {
            write_output(tb_out, table_csv(tb_ell, tb_log));
        } else if (*relgrid) {
            write_output(rg_out, relgrid_csv(rg_ell, rg_x00, rg_xs));
        } else if (*spin_cmd) {
            sp.convention = spin::parse_convention(sp_conv);
            const auto counting = sp_count == "cyclic" ? spin::StateCounting::cyclic : spin::StateCounting::linear;
            const double logz = spin::partition_function(sp, counting);
            std::cout << "log_Z=" << fmt(logz) << '\n';
            std::cout << "Z_per_site=" << fmt(std::exp(logz / static_cast<double>(sp.ell))) << '\n';
            std::cout << "limit=" << fmt(spin::thermodynamic_limit(sp)) << '\n';
            if (!sp_grid.empty()) {
                std::ostringstream g;
                g << "x00,xstar,H1,log_states,energy,log_weight\n";
                for (const auto& c : spin::energy_grid(sp, counting))
                    g << c.x00 << ',' << c.xstar << ',' << fmt(binary_W1_closed_form(c.x00, c.xstar, sp.ell)) << ','
                      << fmt(c.log_states) << ',' << fmt(c.energy) << ',' << fmt(c.log_weight) << '\n';
                write_output(sp_grid, g.str());
            }
        } else if (*lev) {
            std::cout << levenshtein(l_w1, l_w2) << '\n';
        } else if (*orc) {
            if (o_what == "necklaces") {
                std::cout << oracle::burnside_necklaces(o_n, o_ell) << '\n';
            } else {
                if (o_word.empty()) throw std::invalid_argument("oracle " + o_what + " needs a word");
                const Alphabet alpha = o_alpha.empty() ? Alphabet::inferred_from(o_word) : Alphabet::from_chars(o_alpha);
                const CyclicWord w(o_word, alpha);
                if (o_what == "class") {
                    const auto cls = oracle::enumerate_class(w, o_k);
                    std::cout << "count=" << cls.count << '\n';
                    for (const auto& m : cls.members) std::cout << to_string(CyclicWord(m, alpha.size()), alpha) << '\n';
                } else {
                    std::cout << oracle::count_euler_circuits(build_quiver(w, o_k)) << '\n';
                }
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "dbent: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
