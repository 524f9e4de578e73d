// onetwo: total 2-labellings from the command line.
//
// Exit codes: 0 success or proper, 1 improper or negative result,
// 2 usage or input error, 3 internal error.

#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "onetwo/construct.hpp"
#include "onetwo/density.hpp"
#include "onetwo/graph_io.hpp"
#include "onetwo/label_auto.hpp"
#include "onetwo/labelling_json.hpp"
#include "onetwo/mad3.hpp"
#include "onetwo/oracle.hpp"

using namespace onetwo;

namespace {

enum Exit { kOk = 0, kNegative = 1, kInput = 2, kInternal = 3 };

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// graph6 when asked or when the file ends in .g6, edge list otherwise
bool is_graph6(const std::string& path, const std::string& format) {
    if (format == "g6") return true;
    if (format == "el") return false;
    return ends_with(path, ".g6");
}

std::vector<std::string> g6_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto t = std::string(detail::trim(line));
        if (!t.empty() && t[0] != '#') out.push_back(t);
    }
    return out;
}

Graph read_graph(const std::string& path, const std::string& format) {
    std::string text = slurp(path);
    if (!is_graph6(path, format)) return parse_edge_list(text);
    auto lines = g6_lines(text);
    if (lines.size() != 1)
        throw ParseError("expected exactly one graph6 line in '" + path + "', found " + std::to_string(lines.size()));
    return parse_graph6(lines[0]);
}

class Output {
  public:
    explicit Output(const std::string& path) : path_(path) {}

    std::ostream& stream() { return path_.empty() || path_ == "-" ? std::cout : buf_; }

    void flush() {
        if (path_.empty() || path_ == "-") {
            std::cout.flush();
            return;
        }
        std::ofstream out(path_, std::ios::binary);
        if (!out) throw ParseError("cannot write '" + path_ + "'");
        out << buf_.str();
    }

  private:
    std::string path_;
    std::ostringstream buf_;
};

ConstructOptions construct_options(bool debug) {
    ConstructOptions o;
    o.debug = debug || debug_from_env();
    return o;
}

const std::vector<std::string> kAlgorithms{"auto", "deg4", "deg5", "deg6", "mad3", "oracle"};

struct Labelled {
    TotalLabelling labelling;
    std::string method;
};

Labelled run_algorithm(const Graph& g, const std::string& alg, Metric m, bool debug, int budget) {
    const ConstructOptions co = construct_options(debug);
    if (alg == "deg4") return {label_deg4(g, co), "deg4"};
    if (alg == "deg5") return {label_deg5(g, co), "deg5"};
    if (alg == "deg6") return {label_deg6(g, co), "deg6"};
    if (alg == "mad3") return {label_mad3(g), "mad3"};
    OracleOptions oo;
    oo.max_elements = budget;
    if (alg == "oracle") {
        auto l = find_proper(g, 2, m, oo);
        if (!l) throw NotFoundError("no " + to_string(m) + "-proper total 2-labelling exists");
        return {std::move(*l), "oracle"};
    }
    AutoOptions ao;
    ao.construct = co;
    ao.oracle = oo;
    auto res = label_auto_report(g, m, ao);
    std::vector<std::string> seen;
    for (const auto& x : res.methods)
        if (std::find(seen.begin(), seen.end(), x) == seen.end()) seen.push_back(x);
    std::string name;
    for (const auto& x : seen) name += (name.empty() ? "" : "+") + x;
    return {std::move(res.labelling), name.empty() ? "none" : name};
}

std::string conflicts_text(const Graph& g, const ProperReport& r) {
    std::string s;
    for (EdgeId e : r.conflicts) {
        if (!s.empty()) s += ' ';
        s += std::to_string(g.edge(e).u) + "-" + std::to_string(g.edge(e).v);
    }
    return s;
}

// ---------------------------------------------------------------------------
// batch

struct BatchRow {
    std::string line;
    bool failed = false;
    bool skipped = false;
};

BatchRow batch_row(const Graph& g, const std::string& alg, Metric m, bool debug, int budget, bool timing) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string method, proper, note;
    BatchRow row;
    try {
        auto r = run_algorithm(g, alg, m, debug, budget);
        method = r.method;
        auto rep = is_proper(g, r.labelling, m);
        proper = rep.proper ? "yes" : "no";
        row.failed = !rep.proper;
        if (!rep.proper) note = "conflicts " + conflicts_text(g, rep);
    } catch (const PreconditionError& e) {
        method = alg;
        proper = "skipped";
        note = e.what();
        row.skipped = true;
    } catch (const Error& e) {
        method = alg;
        proper = "error";
        note = e.what();
        row.failed = true;
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream out;
    for (char& c : note)
        if (c == ',' || c == '\n') c = ';';
    out << to_graph6(g) << ',' << g.order() << ',' << g.size() << ',' << g.max_degree() << ',' << mad(g).str() << ','
        << method << ',' << proper << ',';
    if (timing) out << std::fixed << std::setprecision(3) << ms;
    out << ',' << note << '\n';
    row.line = out.str();
    return row;
}

std::vector<BatchRow> run_batch(const std::vector<Graph>& graphs, const std::string& alg, Metric m, bool debug,
                                int budget, bool timing, int jobs) {
    std::vector<BatchRow> rows(graphs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < graphs.size();)
            rows[i] = batch_row(graphs[i], alg, m, debug, budget, timing);
    };
    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(graphs.size())));
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Total 2-labellings distinguishing adjacent vertices by sum, product or multiset"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    std::string input, output, format = "auto", metric_name = "product", alg = "auto", labels_path, model, dump_path;
    int budget = OracleOptions{}.max_elements, k_max = 3, n = 0, enum_max_n = 0, jobs = 1, random_count = 0;
    std::uint64_t seed = 0;
    bool debug = false, timing = false, connected = false;

    auto add_input = [&](CLI::App* sub) {
        sub->add_option("-i,--input", input, "Graph file ('-' for stdin)")->required();
        sub->add_option("--format", format, "Input format")->check(CLI::IsMember({"auto", "g6", "el"}));
    };
    auto add_metric = [&](CLI::App* sub) {
        sub->add_option("--metric", metric_name, "sum, product or multiset")
            ->check(CLI::IsMember({"sum", "product", "multiset"}));
    };

    auto* label = app.add_subcommand("label", "Compute a proper total 2-labelling as JSON");
    add_input(label);
    add_metric(label);
    label->add_option("--alg", alg, "Algorithm")->check(CLI::IsMember(kAlgorithms));
    label->add_option("-o,--output", output, "Output file (default stdout)");
    label->add_option("--budget", budget, "Oracle budget in vertices plus edges");
    label->add_option("--dump", dump_path, "Write the reproduction state of an internal error here");
    label->add_flag("--debug", debug, "Phase checks after every construction phase");

    auto* verify = app.add_subcommand("verify", "Check a labelling JSON against a graph");
    add_input(verify);
    verify->add_option("-l,--labelling", labels_path, "Labelling JSON")->required();
    auto* verify_metric = verify->add_option("--metric", metric_name, "Defaults to the metric stored in the JSON")
                              ->check(CLI::IsMember({"sum", "product", "multiset"}));

    auto* chi = app.add_subcommand("chi", "Smallest k admitting a proper total k-labelling (exhaustive)");
    add_input(chi);
    add_metric(chi);
    chi->add_option("--k-max", k_max, "Largest k tried");
    chi->add_option("--budget", budget, "Oracle budget in vertices plus edges");

    auto* madc = app.add_subcommand("mad", "Maximum average degree as an exact fraction");
    add_input(madc);

    auto* gen = app.add_subcommand("gen", "Seeded random graph");
    gen->add_option("--model", model, "gnp:p, regular:d, max_degree:d or mad_bounded:b")->required();
    gen->add_option("--n", n, "Number of vertices")->required()->check(CLI::NonNegativeNumber);
    gen->add_option("--seed", seed, "Random seed")->required();
    gen->add_option("--format", format, "Output format")->check(CLI::IsMember({"auto", "g6", "el"}));
    gen->add_option("-o,--output", output, "Output file (default stdout)");

    auto* enumc = app.add_subcommand("enum", "All graphs on n vertices up to isomorphism, as graph6");
    enumc->add_option("--n", n, "Number of vertices")->required()->check(CLI::Range(0, 9));
    enumc->add_flag("--connected", connected, "Connected graphs only");
    enumc->add_option("-o,--output", output, "Output file (default stdout)");

    auto* audit = app.add_subcommand("audit-discharge", "Charges before and after the discharging rules, as CSV");
    add_input(audit);
    audit->add_option("-o,--output", output, "Output file (default stdout)");

    auto* batch = app.add_subcommand("batch", "Label many graphs, one CSV row each");
    auto* opt_enum = batch->add_option("--enum-max-n", enum_max_n, "All graphs with 1..N vertices")->check(CLI::Range(1, 8));
    auto* opt_random = batch->add_option("--random", random_count, "Number of random graphs")->check(CLI::PositiveNumber);
    auto* opt_in = batch->add_option("-i,--input", input, "File of graph6 lines");
    opt_enum->excludes(opt_random)->excludes(opt_in);
    opt_random->excludes(opt_in);
    auto* opt_model = batch->add_option("--model", model, "Random model");
    auto* opt_n = batch->add_option("--n", n, "Vertices per random graph")->check(CLI::NonNegativeNumber);
    auto* opt_seed = batch->add_option("--seed", seed, "Seed of the first random graph; graph i uses seed + i");
    opt_random->needs(opt_model)->needs(opt_n)->needs(opt_seed);
    batch->add_flag("--connected", connected, "With --enum-max-n: connected graphs only");
    add_metric(batch);
    batch->add_option("--alg", alg, "Algorithm")->check(CLI::IsMember(kAlgorithms));
    batch->add_option("--budget", budget, "Oracle budget in vertices plus edges");
    batch->add_option("--jobs", jobs, "Worker threads; rows keep input order")->check(CLI::PositiveNumber);
    batch->add_flag("--timing", timing, "Fill the wall_ms column (output is then not reproducible)");
    batch->add_flag("--debug", debug, "Phase checks after every construction phase");
    batch->add_option("-o,--output", output, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInput;
    }

    try {
        const Metric metric = parse_metric(metric_name);
        Output out(output);

        if (label->parsed()) {
            Graph g = read_graph(input, format);
            Labelled r;
            try {
                r = run_algorithm(g, alg, metric, debug, budget);
            } catch (const InternalError& e) {
                if (!dump_path.empty() && !e.dump().empty()) std::ofstream(dump_path) << e.dump() << '\n';
                throw;
            }
            auto j = labelling_json(g, r.labelling, metric);
            j["algorithm"] = r.method;
            out.stream() << j.dump() << '\n';
            out.flush();
            return kOk;
        }

        if (verify->parsed()) {
            Graph g = read_graph(input, format);
            auto doc = parse_labelling_json(slurp(labels_path));
            TotalLabelling l = labelling_for(g, doc);
            Metric m = metric;
            if (verify_metric->count() == 0 && doc.metric) m = *doc.metric;
            auto rep = is_proper(g, l, m);
            if (rep.proper) {
                std::cout << "proper " << to_string(m) << '\n';
                return kOk;
            }
            std::cout << "improper " << to_string(m) << ": " << conflicts_text(g, rep) << '\n';
            return kNegative;
        }

        if (chi->parsed()) {
            Graph g = read_graph(input, format);
            OracleOptions oo;
            oo.max_elements = budget;
            auto r = chi_total(g, metric, k_max, oo);
            std::cout << r.chi << '\n';
            return kOk;
        }

        if (madc->parsed()) {
            std::cout << mad(read_graph(input, format)).str() << '\n';
            return kOk;
        }

        if (gen->parsed()) {
            Graph g = random_graph(parse_random_model(model), n, seed);
            if (format == "el") out.stream() << to_edge_list(g);
            else out.stream() << to_graph6(g) << '\n';
            out.flush();
            return kOk;
        }

        if (enumc->parsed()) {
            for (const auto& g : enumerate_graphs(n, connected)) out.stream() << to_graph6(g) << '\n';
            out.flush();
            return kOk;
        }

        if (audit->parsed()) {
            Graph g = read_graph(input, format);
            ChargeLedger L;
            try {
                L = discharge_audit(g);
            } catch (const ValidationError& e) {
                std::cerr << "onetwo: " << e.what() << '\n';
                return kNegative;
            }
            auto& os = out.stream();
            os << "v,d,omega,omega_star,rules\n";
            for (Vertex v = 0; v < g.order(); ++v)
                os << v << ',' << g.degree(v) << ',' << L.omega[v].str() << ',' << L.omega_star[v].str() << ','
                   << L.rules_at(v) << '\n';
            os << "conservation," << L.total(L.omega).str() << ',' << L.total(L.omega_star).str() << ','
               << (L.conserved() ? "ok" : "broken") << '\n';
            out.flush();
            return kOk;
        }

        if (batch->parsed()) {
            std::vector<Graph> graphs;
            if (enum_max_n > 0) {
                for (int k = 1; k <= enum_max_n; ++k)
                    for (auto& g : enumerate_graphs(k, connected)) graphs.push_back(std::move(g));
            } else if (random_count > 0) {
                auto rm = parse_random_model(model);
                for (int i = 0; i < random_count; ++i) graphs.push_back(random_graph(rm, n, seed + i));
            } else if (!input.empty()) {
                for (const auto& line : g6_lines(slurp(input))) graphs.push_back(parse_graph6(line));
            } else {
                throw ParseError("batch needs --enum-max-n, --random or --input");
            }
            auto rows = run_batch(graphs, alg, metric, debug, budget, timing, jobs);
            auto& os = out.stream();
            os << "graph6,n,m,max_degree,mad,algorithm,proper,wall_ms,note\n";
            int proper = 0, failed = 0, skipped = 0;
            for (const auto& r : rows) {
                os << r.line;
                failed += r.failed;
                skipped += r.skipped;
                proper += !r.failed && !r.skipped;
            }
            os << "# graphs " << rows.size() << " proper " << proper << " failed " << failed << " skipped " << skipped
               << '\n';
            out.flush();
            return failed ? kNegative : kOk;
        }
    } catch (const InternalError& e) {
        std::cerr << "onetwo: internal error: " << e.what() << '\n';
        if (!e.dump().empty()) std::cerr << e.dump() << '\n';
        return kInternal;
    } catch (const NotFoundError& e) {
        std::cerr << "onetwo: " << e.what() << '\n';
        return kNegative;
    } catch (const Error& e) {
        std::cerr << "onetwo: " << e.what() << '\n';
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "onetwo: internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kInput;
}
