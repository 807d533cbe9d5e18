#include "markov_embed/cli.hpp"

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "markov_embed/classes3.hpp"
#include "markov_embed/dispatch.hpp"
#include "markov_embed/linalg.hpp"
#include "markov_embed/matrix_io.hpp"

namespace markov::cli {

namespace {

using json = nlohmann::ordered_json;

json rows_of(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json necessity_json(const NecessityReport& r) {
    json j;
    j["det"] = r.det;
    j["det_ok"] = r.det_ok;
    j["no_zero_eigenvalue"] = r.no_zero_eigenvalue;
    j["elving_ok"] = r.elving_ok;
    j["elving_borderline"] = r.elving_borderline;
    j["negative_real_even_multiplicity"] = r.negative_real_even_multiplicity;
    j["positivity_or_reducible"] = r.positivity_or_reducible;
    j["transitivity_ok"] = r.transitivity_ok;
    j["overall"] = r.overall;
    j["failures"] = r.failures;
    j["notes"] = r.notes;
    return j;
}

json structure_json(const StructureFlags& f) {
    json j;
    j["positive"] = f.positive;
    j["irreducible"] = f.irreducible;
    j["primitive"] = f.primitive;
    j["doubly_stochastic"] = f.doubly_stochastic;
    j["symmetric"] = f.symmetric;
    return j;
}

json classes_json(const ClassTags& t) {
    json j;
    j["equal_input"] = t.equal_input.has_value();
    if (t.equal_input) {
        j["constant_input"] = t.equal_input->constant_input;
        j["c"] = t.equal_input->c_sum;
    }
    j["circulant"] = t.circulant.has_value();
    j["symmetric"] = t.symmetric;
    j["doubly_stochastic"] = t.doubly_stochastic;
    return j;
}

json verdict_json(const EmbedVerdict& v) {
    json gens = json::array();
    for (const auto& g : v.generators) {
        json jg;
        jg["provenance"] = std::string(to_string(g.provenance));
        jg["residual"] = g.residual;
        json params = json::object();
        for (const auto& [k, val] : g.params) params[k] = val;
        jg["params"] = std::move(params);
        jg["rows"] = rows_of(g.q);
        gens.push_back(std::move(jg));
    }
    json j;
    j["verdict"] = std::string(to_string(v.verdict));
    j["generators"] = std::move(gens);
    j["reasons"] = v.reasons;
    j["notes"] = v.notes;
    return j;
}

int exit_for(Verdict v) {
    switch (v) {
        case Verdict::Embeddable: return kPass;
        case Verdict::NotEmbeddable: return kNegative;
        case Verdict::Undecided: return kUndecided;
    }
    return kUndecided;
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

int cmd_check(const std::string& path, double tol, std::ostream& out) {
    const SquareMatrix raw = read_matrix_file(path);
    const StochasticMatrix m = validate_stochastic(raw, tol);
    const NecessityReport r = necessary_conditions(m);
    json j;
    j["input_digest"] = matrix_digest(raw.mat());
    j["dim"] = m.dim();
    j["necessary_conditions"] = necessity_json(r);
    j["structure"] = structure_json(structure_flags(m));
    emit(out, j);
    if (!r.overall) return kNegative;
    return r.elving_borderline ? kUndecided : kPass;
}

int cmd_embed(const std::string& path, double tol, int window, std::ostream& out) {
    const SquareMatrix raw = read_matrix_file(path);
    const StochasticMatrix m = validate_stochastic(raw, tol);
    EmbedOptions opt;
    opt.tol = tol;
    opt.window.k_max = window;
    const EmbedReport rep = embed(m, opt);
    json j;
    j["input_digest"] = matrix_digest(raw.mat());
    j["dim"] = m.dim();
    j["classes"] = classes_json(rep.classes);
    j["necessary_conditions"] = necessity_json(rep.necessity);
    const json verdict = verdict_json(rep.verdict);
    for (const auto& [k, v] : verdict.items()) j[k] = v;
    emit(out, j);
    return exit_for(rep.verdict.verdict);
}

std::string region_label(const EmbedVerdict& v) {
    for (const auto& n : v.notes)
        if (n.rfind("envelope", 0) == 0) return "envelope";
    return std::string(to_string(v.verdict));
}

EmbedVerdict sym3_cell(double a, double b, double c) {
    Matrix m(3, 3);
    m << 1.0 - a - b, a, b, a, 1.0 - a - c, c, b, c, 1.0 - b - c;
    const StochasticMatrix sm = validate_stochastic(SquareMatrix(std::move(m)), 1e-12);
    if (!necessary_conditions(sm).overall) return EmbedVerdict::not_embeddable("necessary conditions");
    return sym_embed(sm);
}

int cmd_region(const std::string& kind, int grid, double c_fixed, const std::string& path, std::ostream& out) {
    const int cap = kind == "circ4" ? 200 : 2000;
    if (grid < 1 || grid > cap) {
        throw CLI::ValidationError("--grid", "must lie in [1, " + std::to_string(cap) + "] for " + kind);
    }
    std::ofstream file;
    std::ostream* sink = &out;
    if (!path.empty() && path != "-") {
        file.open(path);
        if (!file) throw EmbedError(ErrorCode::ParseError, "cannot write " + path);
        sink = &file;
    }
    auto centre = [grid](int i) { return (i + 0.5) / grid; };
    auto safe = [](auto&& fn) {
        try {
            return region_label(fn());
        } catch (const EmbedError&) {
            return std::string("undecided");
        }
    };
    std::ostream& os = *sink;
    if (kind == "circ3") {
        os << "x,y,verdict\n";
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j) {
                const double x = centre(i), y = centre(j);
                const std::string label = x + y > 1.0 ? "not_markov" : safe([&] { return circ3_embed(x, y); });
                os << format_exact(x) << ',' << format_exact(y) << ',' << label << '\n';
            }
    } else if (kind == "circ4") {
        os << "x,y,z,verdict\n";
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j)
                for (int k = 0; k < grid; ++k) {
                    const double x = centre(i), y = centre(j), z = centre(k);
                    const std::string label =
                        x + y + z > 1.0 ? "not_markov" : safe([&] { return circ4_embed(x, y, z); });
                    os << format_exact(x) << ',' << format_exact(y) << ',' << format_exact(z) << ',' << label << '\n';
                }
    } else if (kind == "sym3") {
        os << "a,b,c,verdict\n";
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j) {
                const double a = centre(i), b = centre(j);
                const bool markov = a + b <= 1.0 && a + c_fixed <= 1.0 && b + c_fixed <= 1.0;
                const std::string label = markov ? safe([&] { return sym3_cell(a, b, c_fixed); }) : "not_markov";
                os << format_exact(a) << ',' << format_exact(b) << ',' << format_exact(c_fixed) << ',' << label << '\n';
            }
    } else {
        throw CLI::ValidationError("kind", "expected circ3, circ4 or sym3");
    }
    os.flush();
    if (!os) throw EmbedError(ErrorCode::ParseError, "write to " + path + " failed");
    return kPass;
}

int cmd_sample(int n, int d, std::uint64_t seed, double scale, const std::string& format, std::ostream& out) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, scale);
    for (int s = 0; s < n; ++s) {
        Matrix q = Matrix::Zero(d, d);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j)
                if (i != j) q(i, j) = unif(rng);
            q(i, i) = -q.row(i).sum();
        }
        const Matrix m = expm(q);
        if (format == "csv") {
            out << "# sample " << s << " Q\n" << matrix_to_csv(q) << "# sample " << s << " M\n" << matrix_to_csv(m);
        } else {
            json j;
            j["index"] = s;
            j["dim"] = d;
            j["Q"] = rows_of(q);
            j["M"] = rows_of(m);
            out << j.dump() << '\n';
        }
    }
    return kPass;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Markov embedding problem: necessary conditions, class solvers and branch search"};
    app.require_subcommand(1);

    double tol = kDefaultTol;
    std::string path;
    int window = 8;
    std::string kind;
    int grid = 0;
    double c_fixed = 0.1;
    std::string out_path;
    int n = 1;
    int d = 3;
    std::uint64_t seed = 0;
    double scale = 1.0;
    std::string format = "json";

    auto* check = app.add_subcommand("check", "Run the necessary conditions on a Markov matrix");
    check->add_option("path", path, "Matrix file (JSON or CSV)")->required();
    check->add_option("--tol", tol, "Validation tolerance")->check(CLI::NonNegativeNumber);

    auto* emb = app.add_subcommand("embed", "Decide embeddability and list generators");
    emb->add_option("path", path, "Matrix file (JSON or CSV)")->required();
    emb->add_option("--tol", tol, "Validation tolerance")->check(CLI::NonNegativeNumber);
    emb->add_option("--branch-window", window, "Largest logarithm branch index")->check(CLI::Range(0, 64));

    auto* region = app.add_subcommand("region", "Rasterise an embeddability region to CSV");
    region->add_option("kind", kind, "circ3, circ4 or sym3")->required()->check(CLI::IsMember({"circ3", "circ4", "sym3"}));
    region->add_option("--grid", grid, "Cells per axis")->required();
    region->add_option("--out", out_path, "Output file, '-' for stdout");
    region->add_option("--c", c_fixed, "Fixed M_23 for sym3")->check(CLI::Range(0.0, 1.0));
    region->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv"}));

    auto* sample = app.add_subcommand("sample", "Emit random generator / exponential pairs");
    sample->add_option("--n", n, "Number of samples")->check(CLI::NonNegativeNumber);
    sample->add_option("--d", d, "Dimension")->check(CLI::Range(kMinDim, kMaxDim));
    sample->add_option("--seed", seed, "RNG seed");
    sample->add_option("--scale", scale, "Upper bound of off-diagonal rates")->check(CLI::PositiveNumber);
    sample->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kPass;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kError;
    }

    try {
        if (*check) return cmd_check(path, tol, out);
        if (*emb) return cmd_embed(path, tol, window, out);
        if (*region) return cmd_region(kind, grid, c_fixed, out_path, out);
        if (*sample) return cmd_sample(n, d, seed, scale, format == "csv" ? "csv" : "json", out);
    } catch (const CLI::Error& e) {
        err << "usage error: " << e.what() << '\n';
        return kError;
    } catch (const EmbedError& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }
    return kError;
}

}  // namespace markov::cli
