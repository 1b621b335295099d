// Command-line driver: batch analysis of factor codes with an unambiguous
// symbol.  Subcommands cover gap-set arithmetic, entropy, image computation,
// the P1/P2 decisions with explicit witnesses, the P3 necessary conditions,
// and independent verification of constructed witnesses.
//
// Exit codes: 0 success, 1 verification failed, 2 parse/usage error,
// 3 numeric or budget failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "gapcode/gapcode.hpp"

using nlohmann::json;
using namespace gapcode;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open input file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_output(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot open output file: " + path);
    out << text;
}

// Inputs describing a code: either a spoke/twocycle spec, a marked-graph
// file, or an unambiguous code given by forbidden words and a marker.
struct CodeInput {
    std::string file;
    std::string marker;
    std::string forbidden;  // comma-separated words
    bool full_shift = false;

    bool is_spoke_file() const {
        if (file.empty()) return false;
        std::istringstream is(read_file(file));
        std::string tok;
        while (is >> tok) {
            if (tok == "#") {
                std::string rest;
                std::getline(is, rest);
                continue;
            }
            return tok == "regular" || tok == "degenerate" || tok == "twocycle";
        }
        return false;
    }

    // The marked graph of the code, however it was described.
    MarkedGraph marked_graph() const {
        if (full_shift || !forbidden.empty()) {
            if (marker.empty()) throw parse_error("--marker is required with --full-shift/--forbidden");
            std::set<Word> words;
            std::stringstream ss(forbidden);
            std::string w;
            while (std::getline(ss, w, ','))
                if (!w.empty()) words.insert(w);
            return recode_to_marked(UnambiguousCode(ForbiddenSft("01", words), marker));
        }
        if (file.empty()) throw parse_error("no input given");
        if (is_spoke_file()) {
            SpokeSpec spec = parse_spoke_spec(read_file(file));
            if (std::holds_alternative<SpokeGraph>(spec))
                return realize_graph(std::get<SpokeGraph>(spec)).mg;
            return realize_two_cycle(std::get<TwoCycleGraph>(spec)).mg;
        }
        LabeledGraph g = parse_graph(read_file(file));
        if (!marker.empty()) return recode_to_marked(UnambiguousCode(g, marker));
        return MarkedGraph::from_labels(g);
    }
};

json eps_to_json(const EventuallyPeriodicSet& s) {
    return {{"spec", s.to_string()},
            {"finite", s.is_finite()},
            {"cofinite", s.is_cofinite()}};
}

std::string graph_with_psi(const MarkedGraph& mg, const std::map<VertexId, VertexId>& psi) {
    std::ostringstream os;
    for (auto& [h, g] : psi) os << "# psi " << h << " " << g << "\n";
    os << write_graph(mg.graph);
    return os.str();
}

int cmd_entropy(const std::string& spec, double tol, bool as_json) {
    GapShift y(EventuallyPeriodicSet::parse(spec));
    double lambda = gap_entropy_root(y, tol);
    if (as_json) {
        std::cout << json{{"lambda", lambda}, {"h_top", std::log(lambda)}}.dump(2) << "\n";
    } else {
        std::cout << "lambda = " << std::setprecision(12) << std::fixed << lambda << "\n"
                  << "h_top  = " << std::log(lambda) << "\n";
    }
    return 0;
}

int cmd_gapset(const std::string& spec, bool as_json) {
    EventuallyPeriodicSet s = EventuallyPeriodicSet::parse(spec);
    std::optional<ForbiddenSft> f;
    if (!s.empty()) f = standard_forbidden_set(GapShift(s));
    json j = eps_to_json(s);
    if (f) {
        json words = json::array();
        for (const Word& w : f->forbidden) words.push_back(w);
        j["standard_forbidden_set"] = words;
    } else {
        j["standard_forbidden_set"] = nullptr;
    }
    if (as_json) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "canonical: " << s.to_string() << "\n";
        if (f) {
            std::cout << "sft: " << (s.is_finite() ? "finite" : "cofinite") << ", forbidden:";
            for (const Word& w : f->forbidden) std::cout << " " << w;
            std::cout << "\n";
        } else {
            std::cout << "sft: no (gap set is neither finite nor cofinite)\n";
        }
    }
    return 0;
}

int cmd_image(const CodeInput& in, bool as_json) {
    EventuallyPeriodicSet s = image_gap_set(in.marked_graph());
    if (as_json) std::cout << eps_to_json(s).dump(2) << "\n";
    else std::cout << "S = " << s.to_string() << "\n";
    return 0;
}

json eta_to_json(const MarkedGraph& domain, const EtaConstruction& eta) {
    json cycles = json::object();
    for (auto& [gap, cyc] : eta.cycle_for_gap) {
        json seq = json::array();
        for (VertexId v : cyc) seq.push_back(domain.graph.display(v));
        cycles[std::to_string(gap)] = seq;
    }
    auto path_names = [&](const std::vector<VertexId>& p) {
        json seq = json::array();
        for (VertexId v : p) seq.push_back(domain.graph.display(v));
        return seq;
    };
    json j{{"cycles", cycles}, {"radius", eta.radius}};
    if (eta.tau_vertex) {
        j["beta_plus"] = path_names(eta.beta_plus);
        j["beta_minus"] = path_names(eta.beta_minus);
        j["tau"] = domain.graph.display(*eta.tau_vertex);
    }
    return j;
}

int cmd_p1(const CodeInput& in, bool as_json, const std::string& out_path) {
    json j;
    std::ostringstream text;
    if (in.full_shift) {
        FullShiftP1 r = full_shift_p1(in.marker);
        j["condition1"] = r.condition1;
        j["onto_F"] = r.onto_F;
        j["onto_complementF"] = r.onto_complementF;
        j["S"] = r.gap_set.to_string();
        text << "marker " << in.marker << ": S = " << r.gap_set.to_string() << "\n";
        text << "condition (a symbol occurs at most once): " << (r.condition1 ? "yes" : "no") << "\n";
        text << "X_F " << (r.onto_F ? "works" : "fails") << "; X_Fbar "
             << (r.onto_complementF ? "works" : "fails") << "\n";
    }
    MarkedGraph mg = in.marked_graph();
    P1Verdict v = check_p1(mg);
    j["holds"] = v.holds;
    j["S"] = v.gap_set.to_string();
    if (v.holds) {
        j["witness"] = v.witness == P1Witness::C1 ? "C1" : "C2";
        text << "P1 HOLDS via " << (v.witness == P1Witness::C1 ? "C1 (finite gap set)" : "C2");
        if (v.fixed_vertex) {
            j["fixed_point"] = mg.graph.display(*v.fixed_vertex);
            text << " (fixed point at " << mg.graph.display(*v.fixed_vertex) << ")";
        }
        text << "\n";
        EtaConstruction eta = construct_eta(mg, v);
        j["eta"] = eta_to_json(mg, eta);
        j["z_vertices"] = eta.z.graph.vertices.size();
        if (!out_path.empty()) {
            write_output(out_path, graph_with_psi(eta.z, eta.psi));
            text << "Z written to " << out_path << " (" << eta.z.graph.vertices.size()
                 << " vertices, radius " << eta.radius << ")\n";
        }
    } else {
        text << "P1 FAILS (gap set infinite and no fixed point besides the marker)\n";
    }
    std::cout << (as_json ? j.dump(2) + "\n" : text.str());
    return 0;
}

json certificates_to_json(const P2Certificates& c) {
    return {{"no_diamond", c.no_diamond},
            {"degree", c.degree_value},
            {"magic_word", c.magic_word},
            {"magic_block", std::string(1, c.magic_block)},
            {"gap_sets_equal", c.gap_sets_equal},
            {"psi_injective", c.psi_injective},
            {"psi_injectivity_len", c.psi_injectivity_len}};
}

int cmd_p2(const std::string& file, bool as_json, const std::string& out_path) {
    SpokeSpec spec = parse_spoke_spec(read_file(file));
    if (std::holds_alternative<TwoCycleGraph>(spec)) {
        const auto& tc = std::get<TwoCycleGraph>(spec);
        TwoCycleConstruction hc = construct_H_two_cycle(tc);
        EventuallyPeriodicSet s = two_cycle_gap_set(tc);
        bool no_diamond = !has_graph_diamond(hc.h);
        DegreeResult dr = degree(hc.h);
        bool gaps_ok = image_gap_set(hc.h) == s;
        json j{{"holds", true},
               {"kind", "twocycle"},
               {"u", hc.u},
               {"S", s.to_string()},
               {"certificates",
                json{{"no_diamond", no_diamond}, {"degree", dr.degree}, {"gap_sets_equal", gaps_ok}}}};
        if (!out_path.empty()) write_output(out_path, graph_with_psi(hc.h, hc.psi));
        if (as_json) std::cout << j.dump(2) << "\n";
        else {
            std::cout << "P2 HOLDS (two-cycle construction, u = " << hc.u << ")\n"
                      << "S = " << s.to_string() << "\n"
                      << "certificates: no_diamond=" << no_diamond << " degree=" << dr.degree
                      << " gap_sets_equal=" << gaps_ok << "\n";
            if (!out_path.empty()) std::cout << "H written to " << out_path << "\n";
        }
        return 0;
    }
    const auto& sg = std::get<SpokeGraph>(spec);
    P2Result r = check_p2(sg);
    json j{{"holds", r.holds}, {"S", r.inv.S.to_string()}};
    json kj = json::object();
    for (auto& [i, k] : r.inv.K) {
        json set = json::array();
        for (long long x : k) set.push_back(x);
        kj["K" + std::to_string(i)] = set;
    }
    j["D"] = r.inv.bigD;
    j["K"] = kj;
    if (r.w) {
        json w = json::array();
        for (int i : *r.w) w.push_back(i);
        j["W"] = w;
        json cycles = json::array();
        for (long long g : r.h->added_cycle_gaps) cycles.push_back(g);
        j["added_cycles_for_gaps"] = cycles;
        j["certificates"] = certificates_to_json(*r.certificates);
        if (!out_path.empty()) write_output(out_path, graph_with_psi(r.h->h, r.h->psi));
    }
    if (as_json) {
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "S = " << r.inv.S.to_string() << " (D = " << r.inv.bigD << ")\n";
    for (auto& [i, k] : r.inv.K) {
        std::cout << "K" << i << " = {";
        bool first = true;
        for (long long x : k) {
            std::cout << (first ? "" : ",") << x;
            first = false;
        }
        std::cout << "}\n";
    }
    if (!r.holds) {
        std::cout << "P2 FAILS: no W with disjoint classes covering the union\n";
        return 0;
    }
    std::cout << "P2 HOLDS with W = {";
    bool first = true;
    for (int i : *r.w) {
        std::cout << (first ? "" : ",") << i;
        first = false;
    }
    std::cout << "}";
    if (!r.h->added_cycle_gaps.empty()) {
        std::cout << ", added cycles for gaps:";
        for (long long g : r.h->added_cycle_gaps) std::cout << " " << g;
    }
    std::cout << "\n";
    const auto& c = *r.certificates;
    std::cout << "certificates: no_diamond=" << c.no_diamond << " degree=" << c.degree_value
              << " (magic word " << c.magic_word << ") gap_sets_equal=" << c.gap_sets_equal
              << " psi_injective=" << c.psi_injective << "\n";
    if (!out_path.empty()) std::cout << "H written to " << out_path << "\n";
    return 0;
}

int cmd_p3(const std::string& file, double tol) {
    SpokeSpec spec = parse_spoke_spec(read_file(file));
    if (!std::holds_alternative<SpokeGraph>(spec))
        throw parse_error("p3-necessary expects a spoke spec");
    const auto& sg = std::get<SpokeGraph>(spec);
    SpokeInvariants inv = spoke_invariants(sg);
    double q = std::exp(channel_capacity(sg, tol));
    P3Report r = p3_necessary_with_side_conditions(inv, q);
    json supports = json::array();
    for (auto& p : r.feasible_supports) {
        json sj = json::array();
        for (int i : p) sj.push_back(i);
        json entry{{"support", sj}};
        if (r.side_conditions.count(p)) {
            std::string conds;
            for (char c : r.side_conditions.at(p)) conds += c;
            entry["side_conditions"] = conds;
        }
        supports.push_back(entry);
    }
    json j{{"Q", r.q},
           {"S", inv.S.to_string()},
           {"feasible_supports", supports},
           {"necessary_conditions", r.feasible_supports.empty() ? "infeasible" : "pass"}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_construct_z(const CodeInput& in, const std::string& out_path) {
    if (!in.file.empty() && in.is_spoke_file()) {
        SpokeSpec spec = parse_spoke_spec(read_file(in.file));
        std::string text;
        if (std::holds_alternative<SpokeGraph>(spec)) {
            P2Result r = check_p2(std::get<SpokeGraph>(spec));
            if (!r.holds) {
                std::cout << "no finite-to-one witness: P2 fails\n";
                return 1;
            }
            text = graph_with_psi(r.h->h, r.h->psi);
        } else {
            TwoCycleConstruction hc = construct_H_two_cycle(std::get<TwoCycleGraph>(spec));
            text = graph_with_psi(hc.h, hc.psi);
        }
        if (!out_path.empty()) write_output(out_path, text);
        else std::cout << text;
        return 0;
    }
    MarkedGraph mg = in.marked_graph();
    P1Verdict v = check_p1(mg);
    if (!v.holds) {
        std::cout << "no conjugacy witness: P1 fails\n";
        return 1;
    }
    EtaConstruction eta = construct_eta(mg, v);
    std::ostringstream os;
    os << "# eta radius " << eta.radius << "\n";
    for (auto& [gap, cyc] : eta.cycle_for_gap) {
        os << "# eta gap " << gap << " ->";
        for (VertexId x : cyc) os << " " << mg.graph.display(x);
        os << "\n";
    }
    if (eta.tau_vertex) {
        os << "# eta tau " << mg.graph.display(*eta.tau_vertex) << "\n";
    }
    os << graph_with_psi(eta.z, eta.psi);
    if (!out_path.empty()) write_output(out_path, os.str());
    else std::cout << os.str();
    return 0;
}

int cmd_verify(const std::string& graph_file, const CodeInput& against, int budget_blocks,
               bool as_json) {
    LabeledGraph constructed = parse_graph(read_file(graph_file));
    if (constructed.vertices.empty()) throw parse_error("constructed graph is empty");
    MarkedGraph cmg = MarkedGraph::from_labels(constructed);
    EventuallyPeriodicSet expected = image_gap_set(against.marked_graph());
    if (expected.empty()) throw parse_error("reference image is empty");
    GapShift y(expected);
    OracleBudget budget;
    budget.max_block_len = std::max(budget.max_block_len, budget_blocks);
    LanguageComparison cmp = language_equal_upto(cmg.graph, y, budget_blocks, budget);
    bool no_diamond = !has_graph_diamond(cmg);
    int deg = no_diamond ? degree(cmg).degree : 0;
    bool pass = cmp.equal && no_diamond && deg == 1;
    json j{{"pass", pass},
           {"language_equal", cmp.equal},
           {"no_diamond", no_diamond},
           {"degree", deg},
           {"checked_upto", budget_blocks}};
    if (cmp.divergent) j["first_divergent_word"] = *cmp.divergent;
    if (as_json) std::cout << j.dump(2) << "\n";
    else {
        std::cout << (pass ? "PASS" : "FAIL") << ": language_equal=" << cmp.equal
                  << " no_diamond=" << no_diamond << " degree=" << deg;
        if (cmp.divergent) std::cout << " first_divergent_word=" << *cmp.divergent;
        std::cout << "\n";
    }
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"factor codes with an unambiguous symbol: images, witnesses, capacity"};
    app.require_subcommand(1);
    bool as_json = false;
    double tol = 1e-12;
    int budget_blocks = 24;
    app.add_flag("--json", as_json, "structured output");
    app.add_option("--tol", tol, "numeric tolerance");
    app.add_option("--budget-blocks", budget_blocks, "language comparison horizon");

    std::string gapset_spec, in_file, out_path, against_file;
    CodeInput input, against;

    auto add_code_options = [&](CLI::App* cmd, CodeInput& ci) {
        cmd->add_option("input", ci.file, "graph file or spoke spec");
        cmd->add_option("--marker", ci.marker, "marker word D");
        cmd->add_option("--forbidden", ci.forbidden, "comma-separated forbidden words");
        cmd->add_flag("--full-shift", ci.full_shift, "domain is the full 2-shift");
    };

    CLI::App* entropy_cmd = app.add_subcommand("entropy", "entropy of an S-gap shift");
    entropy_cmd->add_option("gapset", gapset_spec, "finite:{..} or eventual:T=..;exc={..};D=..;res={..}")
        ->required();

    CLI::App* gapset_cmd = app.add_subcommand("gapset", "canonicalize a gap set");
    gapset_cmd->add_option("gapset", gapset_spec, "gap set spec")->required();

    CLI::App* image_cmd = app.add_subcommand("image", "image gap set of a code");
    add_code_options(image_cmd, input);

    CLI::App* p1_cmd = app.add_subcommand("p1", "decide the one-to-one restriction property");
    add_code_options(p1_cmd, input);
    p1_cmd->add_option("-o,--out", out_path, "write the witnessing Z graph here");

    CLI::App* p2_cmd = app.add_subcommand("p2", "decide the finite-to-one restriction property");
    p2_cmd->add_option("input", in_file, "spoke spec file")->required();
    p2_cmd->add_option("-o,--out", out_path, "write the witnessing H graph here");

    CLI::App* p3_cmd = app.add_subcommand("p3-necessary", "capacity-achievability necessary conditions");
    p3_cmd->add_option("input", in_file, "spoke spec file")->required();

    CLI::App* cz_cmd = app.add_subcommand("construct-z", "emit the witnessing subshift");
    add_code_options(cz_cmd, input);
    cz_cmd->add_option("-o,--out", out_path, "write the construction here");

    CLI::App* verify_cmd = app.add_subcommand("verify", "re-check a constructed witness");
    verify_cmd->add_option("graph", against_file, "constructed graph file")->required();
    verify_cmd->add_option("--against", against.file, "reference spec (graph or spoke file)");
    verify_cmd->add_option("--against-marker", against.marker, "reference marker word");
    verify_cmd->add_option("--against-forbidden", against.forbidden, "reference forbidden words");
    verify_cmd->add_flag("--against-full-shift", against.full_shift, "reference full 2-shift");

    try {
        app.parse(argc, argv);
        if (*entropy_cmd) return cmd_entropy(gapset_spec, tol, as_json);
        if (*gapset_cmd) return cmd_gapset(gapset_spec, as_json);
        if (*image_cmd) return cmd_image(input, as_json);
        if (*p1_cmd) return cmd_p1(input, as_json, out_path);
        if (*p2_cmd) return cmd_p2(in_file, as_json, out_path);
        if (*p3_cmd) return cmd_p3(in_file, tol);
        if (*cz_cmd) return cmd_construct_z(input, out_path);
        if (*verify_cmd) return cmd_verify(against_file, against, budget_blocks, as_json);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const numeric_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const budget_error& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
