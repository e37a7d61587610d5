#include "qlpoly/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qlpoly/cheats.hpp"
#include "qlpoly/error.hpp"
#include "qlpoly/logic.hpp"
#include "qlpoly/polytope.hpp"
#include "qlpoly/quantum_ops.hpp"
#include "qlpoly/state_enum.hpp"
#include "qlpoly/suites.hpp"

namespace qlpoly {

namespace {

using nlohmann::json;

class InputError : public Error {
public:
    using Error::Error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open \"" + path + "\"");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// "0.25pi", "pi", "-3/4pi", "1.5" -> radians.
double parse_angle(std::string text) {
    double factor = 1.0;
    if (text.size() >= 2 && text.compare(text.size() - 2, 2, "pi") == 0) {
        factor = kPi;
        text.erase(text.size() - 2);
        if (text.empty() || text == "+") text = "1";
        if (text == "-") text = "-1";
    }
    double value = 0.0;
    const auto slash = text.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            value = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
        } else {
            const std::string num = text.substr(0, slash), den = text.substr(slash + 1);
            std::size_t u1 = 0, u2 = 0;
            value = std::stod(num, &u1) / std::stod(den, &u2);
            if (u1 != num.size() || u2 != den.size()) throw std::invalid_argument(text);
        }
    } catch (const std::exception&) {
        throw DomainError("malformed angle \"" + text + "\"");
    }
    return value * factor;
}

std::vector<std::string> split_list(const std::string& s, char sep = ',') {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            if (!cur.empty()) parts.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    if (!cur.empty()) parts.push_back(cur);
    return parts;
}

json matrix_json(const ComplexMatrix& m) { return json::parse(to_json(m)); }

struct Source {
    std::string builtin_name;
    std::string logic_path;
    std::string partitions_path;
    std::string vrep_path;
    std::string terms;
};

void add_logic_source(CLI::App* cmd, Source& src) {
    auto* b = cmd->add_option("--builtin", src.builtin_name, "Builtin structure (mo3, ks14, ch-classical)");
    auto* l = cmd->add_option("--logic", src.logic_path, "Logic JSON file");
    auto* p = cmd->add_option("--partitions", src.partitions_path, "Partition logic JSON file");
    b->excludes(l)->excludes(p);
    l->excludes(p);
}

Logic load_logic(const Source& src) {
    if (!src.builtin_name.empty()) return builtin(src.builtin_name).logic;
    if (!src.logic_path.empty()) return parse_logic(read_file(src.logic_path));
    if (!src.partitions_path.empty()) return from_partitions(parse_partition_logic(read_file(src.partitions_path)));
    throw CLI::RequiredError("one of --builtin, --logic, --partitions");
}

NamedVRep load_vrep(const Source& src, unsigned threads) {
    if (!src.vrep_path.empty()) return parse_vrep(read_file(src.vrep_path));
    const Logic logic = load_logic(src);
    const auto states = enumerate_states(logic, threads);
    const TermList terms = src.terms.empty() ? TermList::singletons(logic.atom_count())
                                             : parse_terms(src.terms, logic.atoms);
    return {build_vertices(states, terms), term_names(terms, logic.atoms)};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Correlation polytopes, two-valued states, operator decompositions and parameter cheats",
                 "qlpoly"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string format;
    std::string output_path;
    unsigned threads = 1;
    double tolerance = kDensityTolerance;
    app.add_option("--format", format, "Output format: json, table or csv")
        ->check(CLI::IsMember({"json", "table", "csv"}));
    app.add_option("--output", output_path, "Write results to this file instead of stdout");
    app.add_option("--threads", threads, "Worker threads for enumeration and scans")->check(CLI::Range(1u, 256u));
    app.add_option("--tolerance", tolerance, "Density-operator tolerance (quantum commands)")
        ->check(CLI::PositiveNumber);

    Source src;

    auto* states_cmd = app.add_subcommand("states", "Enumerate the two-valued states of a logic");
    add_logic_source(states_cmd, src);

    auto* hull_cmd = app.add_subcommand("hull", "Equalities and facets of a correlation polytope");
    add_logic_source(hull_cmd, src);
    hull_cmd->add_option("--terms", src.terms, "Coordinates, e.g. \"a1;a2;a1&a13\" (default: all atoms)");
    hull_cmd->add_option("--vrep", src.vrep_path, "VRep JSON file instead of a logic");

    std::string relations_path;
    auto* check_cmd = app.add_subcommand("check", "Check relations against the vertices of a polytope");
    add_logic_source(check_cmd, src);
    check_cmd->add_option("--terms", src.terms, "Coordinates (default: all atoms)");
    check_cmd->add_option("--vrep", src.vrep_path, "VRep JSON file instead of a logic");
    check_cmd->add_option("--relations", relations_path, "Relations in hull text format")->required();

    auto* quantum_cmd = app.add_subcommand("quantum", "Operator decompositions and generalized probabilities");
    quantum_cmd->require_subcommand(1);
    std::string matrix_path, rho_path, sigma_path;
    std::vector<std::string> matrix_paths;
    auto* decompose_cmd = quantum_cmd->add_subcommand("decompose", "Cartesian and polar decomposition");
    decompose_cmd->add_option("--matrix", matrix_path, "Matrix JSON file")->required();
    auto* genprob_cmd = quantum_cmd->add_subcommand("genprob", "Tr(rho sigma) for two density operators");
    genprob_cmd->add_option("--rho", rho_path, "First density operator")->required();
    genprob_cmd->add_option("--sigma", sigma_path, "Second density operator")->required();
    auto* context_cmd = quantum_cmd->add_subcommand("context", "Context operator of commuting observables");
    context_cmd->add_option("--matrix", matrix_paths, "Observable JSON file (repeat)")->required();

    auto* cheat_cmd = app.add_subcommand("cheat", "Probability laws, parameter cheats and the CH expression");
    cheat_cmd->require_subcommand(1);
    std::string laws = "classical,quantum,stq11", transforms;
    std::size_t samples = 101;
    auto* table_cmd = cheat_cmd->add_subcommand("table", "Sample laws and transforms on [0, pi]");
    table_cmd->add_option("--laws", laws, "Comma-separated laws");
    table_cmd->add_option("--transforms", transforms, "Comma-separated transforms");
    table_cmd->add_option("--samples", samples, "Grid points including both endpoints")->check(CLI::Range(2u, 10000000u));
    std::string law_name = "cheat-quantum", angles_text, convention_name = "full";
    double step = 1e-4;
    auto* ch_cmd = cheat_cmd->add_subcommand("ch", "Evaluate the Clauser-Horne expression");
    ch_cmd->add_option("--law", law_name, "Probability law");
    ch_cmd->add_option("--angles", angles_text, "a1,b1,a2,b2 (e.g. 0,0.25pi,0.5pi,0.75pi)")->required();
    ch_cmd->add_option("--convention", convention_name, "full or half")->check(CLI::IsMember({"full", "half"}));
    auto* scan_cmd = cheat_cmd->add_subcommand("scan", "Maximize CH over angles (0, x, 2x, 3x)");
    scan_cmd->add_option("--law", law_name, "Probability law");
    scan_cmd->add_option("--convention", convention_name, "full or half")->check(CLI::IsMember({"full", "half"}));
    scan_cmd->add_option("--step", step, "Grid step in radians")->check(CLI::PositiveNumber);

    std::string suite;
    auto* verify_cmd = app.add_subcommand("verify", "Run a built-in reproduction suite");
    verify_cmd->add_option("--suite", suite, "Suite name")->required()->check(CLI::IsMember(suite_names()));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "qlpoly: " << e.what() << "\n";
        return kExitUsage;
    }

    std::ostringstream buffer;
    int code = kExitOk;
    try {
        if (states_cmd->parsed()) {
            const auto states = enumerate_states(load_logic(src), threads);
            if (format == "table") buffer << truth_table(states);
            else buffer << to_json(states) << '\n';
        } else if (hull_cmd->parsed()) {
            const auto named = load_vrep(src, threads);
            const auto h = double_description(named.vrep);
            if (format == "json") buffer << to_json(h, named.names) << '\n';
            else buffer << to_text(h, named.names);
        } else if (check_cmd->parsed()) {
            const auto named = load_vrep(src, threads);
            const auto rels = parse_relations(read_file(relations_path), named.names);
            json results = json::array();
            for (const auto& rel : rels) {
                const bool ok = check_relation(named.vrep, rel.row, rel.kind);
                if (!ok) code = kExitVerifyFailed;
                const auto text = format_relation(rel.row, rel.kind, named.names);
                if (format == "json") results.push_back({{"relation", text}, {"holds", ok}});
                else buffer << (ok ? "true  " : "false ") << text << '\n';
            }
            if (format == "json") buffer << results.dump() << '\n';
        } else if (decompose_cmd->parsed()) {
            const auto a = parse_matrix(read_file(matrix_path));
            const double scale = a.frobenius_norm();
            json doc;
            doc["normal"] = is_normal(a);
            const auto cart = cartesian(a);
            doc["cartesian"] = {
                {"B", matrix_json(cart.real_part)},
                {"C", matrix_json(cart.imag_part)},
                {"residual", (a - cart.real_part - Complex(0, 1) * cart.imag_part).max_norm()},
                {"commutator_norm", commutator(cart.real_part, cart.imag_part).frobenius_norm()},
            };
            try {
                const auto pol = polar(a);
                doc["polar"] = {
                    {"D", matrix_json(pol.unitary)},
                    {"E", matrix_json(pol.positive)},
                    {"residual", (a - pol.unitary * pol.positive).max_norm()},
                    {"unitarity_defect",
                     (pol.unitary.adjoint() * pol.unitary - ComplexMatrix::identity(a.dim())).max_norm()},
                    {"commutator_norm", commutator(pol.unitary, pol.positive).frobenius_norm()},
                };
            } catch (const NonInvertible& e) {
                doc["polar"] = {{"error", e.what()}};
            }
            doc["norm"] = scale;
            buffer << doc.dump() << '\n';
        } else if (genprob_cmd->parsed()) {
            const DensityOperator rho(parse_matrix(read_file(rho_path)), tolerance);
            const DensityOperator sigma(parse_matrix(read_file(sigma_path)), tolerance);
            buffer << json{{"P", gen_prob(rho, sigma)}}.dump() << '\n';
        } else if (context_cmd->parsed()) {
            std::vector<ComplexMatrix> ops;
            for (const auto& p : matrix_paths) ops.push_back(parse_matrix(read_file(p)));
            const auto res = context_operator(ops);
            json fns = json::array();
            for (std::size_t i = 0; i < ops.size(); ++i) {
                json table = json::array();
                for (std::size_t j = 0; j < res.values[i].size(); ++j) table.push_back({j, res.values[i][j]});
                fns.push_back({{"table", table},
                               {"polynomial", res.polynomials[i]},
                               {"residual", (ops[i] - apply_table(res.projectors, res.values[i])).max_norm()}});
            }
            buffer << json{{"C", matrix_json(res.context)}, {"functions", fns}}.dump() << '\n';
        } else if (table_cmd->parsed()) {
            std::vector<CurveSource> sources;
            for (const auto& n : split_list(laws)) sources.emplace_back(parse_law(n));
            for (const auto& n : split_list(transforms)) sources.emplace_back(parse_transform(n));
            const auto table = sample_curves(sources, samples);
            for (const auto& s : sources) {
                const auto* law = std::get_if<ProbabilityLaw>(&s);
                if (law && law->kind() == LawKind::Stq) {
                    const auto d = stq_diagnostics(law->order());
                    if (d.overshoot > 0 || d.undershoot > 0)
                        err << "note: " << law->name() << " overshoot " << d.overshoot << ", undershoot "
                            << d.undershoot << " (values not clamped)\n";
                }
            }
            if (format == "json") {
                json doc{{"header", table.header}, {"rows", table.rows}};
                buffer << doc.dump() << '\n';
            } else {
                buffer << to_csv(table);
            }
        } else if (ch_cmd->parsed()) {
            const auto parts = split_list(angles_text);
            if (parts.size() != 4) throw CLI::ValidationError("--angles", "expected four comma-separated angles");
            const ChAngles angles{parse_angle(parts[0]), parse_angle(parts[1]), parse_angle(parts[2]),
                                  parse_angle(parts[3])};
            const auto conv = parse_convention(convention_name);
            const auto r = ch_value(parse_law(law_name), angles, conv);
            json doc{{"S", r.s},
                     {"violated_upper", r.upper_violated},
                     {"violated_lower", r.lower_violated},
                     {"terms",
                      {{"A1B1", r.p_a1b1}, {"A1B2", r.p_a1b2}, {"A2B2", r.p_a2b2}, {"A2B1", r.p_a2b1},
                       {"A1", r.p_a1}, {"B2", r.p_b2}}},
                     {"convention", std::string(to_string(conv))},
                     {"law", law_name}};
            buffer << doc.dump() << '\n';
        } else if (scan_cmd->parsed()) {
            const auto conv = parse_convention(convention_name);
            const auto r = scan_ch(parse_law(law_name), conv, step, threads);
            json doc{{"maxS", r.max_s},
                     {"x", r.x},
                     {"angles", {r.angles.a1, r.angles.b1, r.angles.a2, r.angles.b2}},
                     {"evaluated", r.evaluated},
                     {"convention", std::string(to_string(conv))},
                     {"law", law_name}};
            buffer << doc.dump() << '\n';
        } else if (verify_cmd->parsed()) {
            const auto checks = run_suite(suite);
            std::size_t failed = 0;
            for (const auto& c : checks) {
                buffer << (c.passed ? "PASS " : "FAIL ") << c.name;
                if (!c.passed && !c.detail.empty()) buffer << " (" << c.detail << ")";
                buffer << '\n';
                if (!c.passed) ++failed;
            }
            buffer << suite << ": " << checks.size() - failed << "/" << checks.size() << " passed\n";
            if (failed) code = kExitVerifyFailed;
        }
    } catch (const CLI::Error& e) {
        err << "qlpoly: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "qlpoly: " << e.what() << "\n";
        return kExitInput;
    }

    if (output_path.empty()) {
        out << buffer.str();
    } else {
        std::ofstream file(output_path, std::ios::binary);
        if (!file) {
            err << "qlpoly: cannot write \"" << output_path << "\"\n";
            return kExitInput;
        }
        file << buffer.str();
    }
    return code;
}

}  // namespace qlpoly
