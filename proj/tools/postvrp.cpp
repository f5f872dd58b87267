// postvrp: generate, verify, solve and render post-office routing instances.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "postvrp/postvrp.hpp"

namespace fs = std::filesystem;
using namespace postvrp;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw Failure("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes through a temporary file in the same directory, then renames.
template <class Fill>
void write_with(const fs::path& p, Fill&& fill) {
    if (p.has_parent_path())
        fs::create_directories(p.parent_path());
    fs::path tmp = p;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Failure("cannot write " + tmp.string());
        fill(out);
        out.flush();
        if (!out)
            throw Failure("write failed for " + tmp.string());
    }
    fs::rename(tmp, p);
}

void write_atomic(const fs::path& p, const std::string& bytes) {
    write_with(p, [&](std::ostream& out) { out << bytes; });
}

struct LoadedModel {
    std::string bytes;
    std::string fingerprint;
    StreetModel model;
    StreetGraph graph;
};

LoadedModel load_model(const fs::path& p) {
    LoadedModel m;
    m.bytes = read_file(p);
    m.fingerprint = model_fingerprint(m.bytes);
    m.model = parse_model(m.bytes);
    m.graph = build_graph(m.model);
    return m;
}

/// The explicit --model, or the nearest model.txt above the instance whose
/// fingerprint matches.
LoadedModel model_for(const Instance& inst, const fs::path& instance_path, const std::string& explicit_model) {
    if (!explicit_model.empty()) {
        auto m = load_model(explicit_model);
        if (m.fingerprint != inst.model_fingerprint)
            throw Failure("model fingerprint " + m.fingerprint + " does not match the instance (" +
                          inst.model_fingerprint + ")");
        return m;
    }
    fs::path dir = fs::absolute(instance_path).parent_path();
    for (int up = 0; up < 4 && !dir.empty(); ++up, dir = dir.parent_path()) {
        fs::path cand = dir / "model.txt";
        if (fs::exists(cand) && model_fingerprint(read_file(cand)) == inst.model_fingerprint)
            return load_model(cand);
        if (dir == dir.parent_path())
            break;
    }
    throw Failure("no model.txt with fingerprint " + inst.model_fingerprint + " found near " +
                  instance_path.string() + "; pass --model");
}

struct Options {
    std::string model, catalog, out, instance, solution, dump, background, write_md5, weights = "1,1,1";
    std::string mode = "lex";
    std::optional<std::int64_t> id;
    std::optional<std::uint64_t> seed_override;
    std::optional<int> precision;
    std::size_t matrix_cap = default_matrix_cap;
    std::size_t max_passes = 1000;
    double time_budget = 60.0;
    std::uint64_t seed = 0;
};

int cmd_build(const Options& o) {
    auto m = load_model(o.model);
    auto table = edge_probabilities(m.model, m.graph);
    auto depot = attach_depot(m.model, m.graph);
    std::cout << "streets " << m.model.streets.size() << "\n"
              << "vertices " << m.graph.vertices.size() << "\n"
              << "edges " << m.graph.edges.size() << "\n"
              << "mass " << text::shortest(table.total) << "\n"
              << "depot " << delivery_line(depot, m.model.precision) << "model_md5 " << m.fingerprint << "\n";
    if (!o.dump.empty())
        write_atomic(o.dump, dump_graph(m.graph));
    return 0;
}

Catalog selected_rows(const Options& o) {
    Catalog cat = parse_catalog(read_file(o.catalog));
    if (o.id) {
        std::erase_if(cat.rows, [&](const CatalogRow& r) { return r.id != *o.id; });
        if (cat.rows.empty())
            throw Failure("catalog has no row with id " + std::to_string(*o.id));
    }
    if (o.seed_override)
        for (auto& r : cat.rows)
            r.seed = *o.seed_override;
    return cat;
}

int cmd_generate(const Options& o) {
    auto m = load_model(o.model);
    Catalog cat = selected_rows(o);
    auto table = edge_probabilities(m.model, m.graph);
    const fs::path out = o.out;
    write_atomic(out / "model.txt", m.bytes);
    for (const auto& row : cat.rows) {
        auto inst = generate_instance(m.model, m.fingerprint, m.graph, table, row, o.precision);
        const std::string bytes = serialize_instance(inst);
        const fs::path path = out / row.dir / row.subdir / "instance.txt";
        write_atomic(path, bytes);
        std::cout << row.id << " " << md5_hex(bytes) << " " << path.string() << "\n";
    }
    return 0;
}

int cmd_verify(const Options& o) {
    auto m = load_model(o.model);
    Catalog cat = selected_rows(o);
    auto results = verify_catalog(m.model, m.fingerprint, m.graph, cat, o.precision);
    std::size_t pass = 0, fail = 0, skip = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        std::cout << r.id << " " << to_string(r.status) << " " << r.expected << " " << r.actual << "\n";
        pass += r.status == VerifyStatus::pass;
        fail += r.status == VerifyStatus::fail;
        skip += r.status == VerifyStatus::skip;
        cat.rows[i].md5 = r.actual;
    }
    std::cout << pass << " PASS";
    if (fail)
        std::cout << ", " << fail << " FAIL";
    if (skip)
        std::cout << ", " << skip << " SKIP";
    std::cout << "\n";
    if (!o.write_md5.empty())
        write_atomic(o.write_md5, print_catalog(cat));
    return fail ? 1 : 0;
}

struct LoadedInstance {
    Instance inst;
    LoadedModel model;
};

LoadedInstance load_instance(const Options& o) {
    LoadedInstance li;
    li.inst = parse_instance(read_file(o.instance));
    li.model = model_for(li.inst, o.instance, o.model);
    check_against_graph(li.inst, li.model.graph);
    return li;
}

int cmd_matrix(const Options& o) {
    auto li = load_instance(o);
    if (li.inst.deliveries.deliveries.size() > o.matrix_cap)
        throw Failure("matrix export is capped at " + std::to_string(o.matrix_cap) +
                      " deliveries; raise --matrix-cap or use the distance oracle");
    auto oracle = DistanceOracle::from_model(li.model.model, li.model.graph, li.inst.deliveries);
    const int precision = o.precision.value_or(li.inst.precision);
    if (o.out.empty())
        write_matrix(std::cout, oracle, precision, o.matrix_cap);
    else
        write_with(o.out, [&](std::ostream& out) { write_matrix(out, oracle, precision, o.matrix_cap); });
    return 0;
}

SearchConfig search_config(const Options& o) {
    SearchConfig cfg;
    if (o.mode == "lex")
        cfg.mode = SearchMode::lexicographic;
    else if (o.mode == "scalar")
        cfg.mode = SearchMode::scalarized;
    else
        throw CLI::ValidationError("--mode", "must be 'lex' or 'scalar'");
    std::stringstream ss(o.weights);
    std::string part;
    std::size_t i = 0;
    while (std::getline(ss, part, ',')) {
        auto v = text::to_real(part);
        if (!v || i >= 3)
            throw CLI::ValidationError("--weights", "expected three comma-separated numbers");
        cfg.weights[i++] = *v;
    }
    if (i != 3)
        throw CLI::ValidationError("--weights", "expected three comma-separated numbers");
    cfg.max_passes = o.max_passes;
    cfg.time_budget = o.time_budget;
    cfg.seed = o.seed;
    cfg.validate();
    return cfg;
}

RenderOptions render_options(const Options& o) {
    RenderOptions r;
    if (!o.background.empty())
        r.background_href = o.background;
    return r;
}

int cmd_solve(const Options& o) {
    const SearchConfig cfg = search_config(o);
    auto li = load_instance(o);
    auto oracle = DistanceOracle::from_model(li.model.model, li.model.graph, li.inst.deliveries);
    const ProblemSize size{static_cast<std::size_t>(li.inst.row.n), static_cast<std::size_t>(li.inst.row.k),
                           li.inst.row.w_max};
    auto res = solve(oracle, size, cfg);
    fs::path out = o.out.empty() ? fs::path(o.instance).parent_path() / "solution.txt" : fs::path(o.out);
    write_atomic(out, print_solution(res.solution, size.k, size.n));
    if (!o.dump.empty()) {
        auto parts = partition(res.solution);
        write_atomic(o.dump, render_svg(li.model.model, li.model.graph, li.inst.deliveries, &parts, render_options(o)));
    }
    std::cout << stats_line(res.objectives, res.feasible, res.passes, res.elapsed, li.inst.precision);
    return 0;
}

int cmd_evaluate(const Options& o) {
    auto li = load_instance(o);
    auto sol = parse_solution(read_file(o.solution));
    if (sol.n != static_cast<std::size_t>(li.inst.row.n) || sol.k != static_cast<std::size_t>(li.inst.row.k))
        throw Failure("solution header does not match the instance's k and n");
    auto oracle = DistanceOracle::from_model(li.model.model, li.model.graph, li.inst.deliveries);
    const int p = li.inst.precision;
    auto parts = partition(sol.solution);
    auto lengths = route_lengths(parts, oracle);
    for (std::size_t r = 0; r < lengths.size(); ++r)
        std::cout << "route " << r + 1 << " " << parts.routes[r].size() << " " << text::fixed(lengths[r], p) << "\n";
    auto f = objectives_from_lengths(lengths);
    auto feas = is_feasible(sol.solution, oracle, li.inst.row.w_max);
    std::cout << stats_line(f, feas.feasible, 0, 0.0, p);
    if (!feas) {
        std::cerr << "route " << *feas.violating_route + 1 << " has length " << text::fixed(feas.violating_length, p)
                  << " > Wmax " << text::shortest(li.inst.row.w_max) << "\n";
        return 1;
    }
    return 0;
}

int cmd_render(const Options& o) {
    LoadedModel m;
    DeliverySet deliveries;
    std::optional<RoutePartition> parts;
    if (!o.instance.empty()) {
        auto li = load_instance(o);
        m = std::move(li.model);
        deliveries = li.inst.deliveries;
        if (!o.solution.empty()) {
            auto sol = parse_solution(read_file(o.solution));
            if (sol.n + 1 != deliveries.deliveries.size())
                throw Failure("solution does not match the instance size");
            parts = partition(sol.solution);
        }
    } else {
        if (o.model.empty())
            throw CLI::ValidationError("render", "needs --model or --instance");
        m = load_model(o.model);
        deliveries.deliveries.push_back(attach_depot(m.model, m.graph));
    }
    write_atomic(o.out, render_svg(m.model, m.graph, deliveries, parts ? &*parts : nullptr, render_options(o)));
    return 0;
}

}

int main(int argc, char** argv) {
    CLI::App app{"Post-office VRP benchmark toolkit"};
    app.require_subcommand(1);
    Options o;

    auto* build = app.add_subcommand("build", "parse a model and report its street graph");
    build->add_option("--model", o.model, "model file")->required();
    build->add_option("--dump", o.dump, "write the V/E graph listing here");

    auto* generate = app.add_subcommand("generate", "create one instance file per catalog row");
    auto* verify = app.add_subcommand("verify", "regenerate catalog rows and check their MD5");
    for (auto* c : {generate, verify}) {
        c->add_option("--model", o.model, "model file")->required();
        c->add_option("--catalog", o.catalog, "instance catalog")->required();
        c->add_option("--id", o.id, "only this catalog row");
        c->add_option("--seed-override", o.seed_override, "replace the seed of every selected row");
        c->add_option("--precision", o.precision, "decimal digits for alphas")->check(CLI::Range(0, 12));
    }
    generate->add_option("--out", o.out, "output directory")->required();
    verify->add_option("--write-md5", o.write_md5, "write the catalog with regenerated digests here");

    auto* matrix = app.add_subcommand("matrix", "export the (n+1)x(n+1) weight matrix");
    auto* solve_cmd = app.add_subcommand("solve", "greedy construction plus swap descent");
    auto* evaluate = app.add_subcommand("evaluate", "objectives and feasibility of a solution file");
    auto* render = app.add_subcommand("render", "SVG of the map, deliveries and routes");
    for (auto* c : {matrix, solve_cmd, evaluate})
        c->add_option("--instance", o.instance, "instance file")->required();
    for (auto* c : {matrix, solve_cmd, evaluate, render})
        c->add_option("--model", o.model, "model file (default: nearest matching model.txt above the instance)");
    matrix->add_option("--out", o.out, "output file (default: stdout)");
    matrix->add_option("--precision", o.precision, "decimal digits")->check(CLI::Range(0, 12));
    matrix->add_option("--matrix-cap", o.matrix_cap, "largest delivery count to export");

    solve_cmd->add_option("--mode", o.mode, "lex (f2, f1, f3) or scalar")->check(CLI::IsMember({"lex", "scalar"}));
    solve_cmd->add_option("--weights", o.weights, "scalarization weights f1,f2,f3");
    solve_cmd->add_option("--max-passes", o.max_passes, "swap passes")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--time-budget", o.time_budget, "seconds")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--seed", o.seed, "construction tie-breaking seed");
    solve_cmd->add_option("--out", o.out, "solution file (default: solution.txt next to the instance)");
    solve_cmd->add_option("--svg", o.dump, "also render the solution");
    solve_cmd->add_option("--background", o.background, "background image to link from the SVG");

    evaluate->add_option("--solution", o.solution, "solution file")->required();

    render->add_option("--instance", o.instance, "instance file");
    render->add_option("--solution", o.solution, "solution file");
    render->add_option("--out", o.out, "SVG file")->required();
    render->add_option("--background", o.background, "background image to link from the SVG");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*build)
            return cmd_build(o);
        if (*generate)
            return cmd_generate(o);
        if (*verify)
            return cmd_verify(o);
        if (*matrix)
            return cmd_matrix(o);
        if (*solve_cmd)
            return cmd_solve(o);
        if (*evaluate)
            return cmd_evaluate(o);
        if (*render)
            return cmd_render(o);
    } catch (const CLI::Error& e) {
        std::cerr << "postvrp: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "postvrp: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
