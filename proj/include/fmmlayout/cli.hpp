#ifndef FMMLAYOUT_CLI_HPP
#define FMMLAYOUT_CLI_HPP

// Command-line front end: `layout`, `generate` and `bench`.
//
// Exit codes: 0 success, 1 input error (bad flags, unreadable or malformed
// files), 2 internal error.

#include "assembler.hpp"
#include "fmm.hpp"
#include "graph.hpp"
#include "layout_io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace fmmlayout
{

namespace detail
{
inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open '" + path + "' for reading");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline void write_file(const std::string& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError("cannot open '" + path + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out)
        throw InputError("failed writing '" + path + "'");
}

inline void run_bench(std::size_t n, const std::vector<int>& orders, std::size_t leaf, std::uint64_t seed,
                      std::ostream& out)
{
    using clock = std::chrono::steady_clock;
    Rng rng(seed);
    std::vector<Vec2> points(n);
    for (auto& p : points)
        p = {rng.uniform(), rng.uniform()};
    auto t0 = clock::now();
    const auto exact = brute_force_repulsion(points, 1.0);
    const double t_brute = std::chrono::duration<double>(clock::now() - t0).count();

    char line[160];
    std::snprintf(line, sizeof line, "%10s %4s %14s %12s %12s\n", "N", "p", "max_rel_err", "t_fmm", "t_brute");
    out << line;
    for (int p : orders)
    {
        FmmParams params;
        params.order = p;
        params.leaf_capacity = leaf;
        t0 = clock::now();
        const auto approx = evaluate_repulsion(points, params);
        const double t_fmm = std::chrono::duration<double>(clock::now() - t0).count();
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            worst = std::max(worst, norm(approx.forces[i] - exact[i]) / (norm(exact[i]) + 1e-12));
        std::snprintf(line, sizeof line, "%10zu %4d %14.3e %12.4f %12.4f\n", n, p, worst, t_fmm, t_brute);
        out << line;
    }
}
} // namespace detail

/// Runs the CLI. `args[0]` is the program name.
inline int cli_main(const std::vector<std::string>& args, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr)
{
    CLI::App app{"Large-graph layout: Kamada-Kawai for small components, ForceAtlas2 with a fast "
                 "multipole repulsion solver for large ones",
                 "fmmlayout"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);

    const LayoutParams defaults;
    LayoutParams params = defaults;
    std::string input, format = "edgelist", out_path, svg_path;
    bool timings = false;
    auto* layout = app.add_subcommand("layout", "Lay out a graph and write coordinates and/or SVG");
    layout->add_option("--input", input, "Edge list or transaction records")->required();
    layout->add_option("--format", format, "Input format")->check(CLI::IsMember({"edgelist", "transactions"}));
    layout->add_option("--out", out_path, "Layout document path (stdout if neither --out nor --svg)");
    layout->add_option("--svg", svg_path, "SVG output path");
    layout->add_option("--seed", params.seed, "Random seed");
    layout->add_option("--kk-threshold", params.kk_threshold, "Components below this size use Kamada-Kawai")
        ->check(CLI::PositiveNumber);
    layout->add_option("--fa2-iters", params.fa2.iterations, "ForceAtlas2 iteration budget");
    layout->add_option("--fmm-order", params.fmm.order, "Expansion order")->check(CLI::Range(1, 64));
    layout->add_option("--fmm-leaf", params.fmm.leaf_capacity, "Quadtree leaf capacity")->check(CLI::PositiveNumber);
    layout->add_option("--density", params.target_density, "Target nodes per unit area")->check(CLI::PositiveNumber);
    layout->add_option("--spacing", params.spacing, "Constant added to meta-graph edge lengths")
        ->check(CLI::NonNegativeNumber);
    layout->add_option("--coarsen", params.coarsen, "Contract degree-1/degree-2 nodes before Kamada-Kawai");
    layout->add_option("--threads", params.threads, "Worker threads")->check(CLI::PositiveNumber);
    layout->add_flag("--timings", timings, "Record per-stage timings in the layout document");

    std::size_t tx_count = 1000;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    auto* generate = app.add_subcommand("generate", "Write synthetic transaction records");
    generate->add_option("--tx-count", tx_count, "Number of transactions");
    generate->add_option("--seed", gen_seed, "Random seed");
    generate->add_option("--out", gen_out, "Output path (stdout if omitted)");

    std::size_t bench_n = 20000, bench_leaf = defaults.fmm.leaf_capacity;
    std::vector<int> bench_orders{4, 8, 16};
    std::uint64_t bench_seed = 1;
    auto* bench = app.add_subcommand("bench", "Compare FMM and brute-force repulsion on uniform points");
    bench->add_option("--n", bench_n, "Number of points")->check(CLI::PositiveNumber);
    bench->add_option("--orders", bench_orders, "Expansion orders to sweep")->check(CLI::Range(1, 64));
    bench->add_option("--fmm-leaf", bench_leaf, "Quadtree leaf capacity")->check(CLI::PositiveNumber);
    bench->add_option("--seed", bench_seed, "Random seed");

    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try
    {
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (const CLI::CallForHelp&)
    {
        out << app.help();
        return 0;
    }
    catch (const CLI::CallForAllHelp&)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    }
    catch (const CLI::ParseError& e)
    {
        err << "error: " << e.what() << "\n\n";
        const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << sub->help();
        return 1;
    }

    try
    {
        if (*layout)
        {
            const auto text = detail::read_file(input);
            const auto graph = format == "edgelist" ? parse_edge_list(text)
                                                    : build_transaction_graph(parse_transactions(text));
            const auto result = layout_graph(graph, params);
            const auto doc = make_document(graph, result, params, timings);
            if (!out_path.empty())
                detail::write_file(out_path, write_layout(doc));
            if (!svg_path.empty())
                detail::write_file(svg_path, render_svg(doc));
            if (out_path.empty() && svg_path.empty())
                out << write_layout(doc);
            err << "laid out " << graph.node_count() << " nodes, " << graph.edge_count() << " edges in "
                << result.components.size() << " components";
            if (graph.dropped_self_loops())
                err << " (" << graph.dropped_self_loops() << " self-loops dropped)";
            err << '\n';
        }
        else if (*generate)
        {
            const auto txs = generate_synthetic_transactions(tx_count, gen_seed);
            std::ostringstream s;
            write_transactions(txs, s);
            if (gen_out.empty())
                out << s.str();
            else
                detail::write_file(gen_out, s.str());
        }
        else if (*bench)
        {
            detail::run_bench(bench_n, bench_orders, bench_leaf, bench_seed, out);
        }
        return 0;
    }
    catch (const InputError& e)
    {
        err << "input error: " << e.what() << '\n';
        return 1;
    }
    catch (const std::exception& e)
    {
        err << "internal error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace fmmlayout

#endif
