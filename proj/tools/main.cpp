// Command-line interface for the bidisk Green function and the symmetrized
// bidisk Caratheodory metric.

#include <CLI11.hpp>

#include "bigreen/cli.hpp"

using namespace bigreen;

int main(int argc, char** argv) {
    CLI::App app{"Pluricomplex Green function of the bidisk with two poles"};
    app.require_subcommand(1);

    cli::GreenArgs green_args;
    auto* green_cmd = app.add_subcommand("green", "evaluate one configuration");
    green_cmd->add_option("--pole-a", green_args.pole_a, "first pole as 're+imi,re+imi'")
        ->required();
    green_cmd->add_option("--pole-b", green_args.pole_b, "second pole")->required();
    green_cmd->add_option("--eval", green_args.eval, "evaluation point")->required();
    green_cmd->add_flag("--certify", green_args.certify, "emit the certificate record as JSON");

    cli::SweepSpec sweep_spec;
    std::string domain_name = "axis-z-grid";
    auto* sweep_cmd = app.add_subcommand("sweep", "grid sweep to CSV/JSON");
    sweep_cmd
        ->add_option("--domain", domain_name,
                     "bidisk-eval-grid | axis-z-grid | sym-bidisk-grid")
        ->check(CLI::IsMember({"bidisk-eval-grid", "axis-z-grid", "sym-bidisk-grid"}));
    sweep_cmd->add_option("--p", sweep_spec.p, "first pole parameter");
    sweep_cmd->add_option("--q", sweep_spec.q, "second pole parameter");
    sweep_cmd->add_option("--n1", sweep_spec.n1, "grid resolution (first axis)");
    sweep_cmd->add_option("--n2", sweep_spec.n2, "grid resolution (second axis)");
    sweep_cmd->add_option("--z1min", sweep_spec.z1min);
    sweep_cmd->add_option("--z1max", sweep_spec.z1max);
    sweep_cmd->add_option("--z2min", sweep_spec.z2min);
    sweep_cmd->add_option("--z2max", sweep_spec.z2max);
    sweep_cmd->add_option("--sym-pole", sweep_spec.sym_pole, "pole in G as 's,p'");
    sweep_cmd->add_option("--format", sweep_spec.format)->check(CLI::IsMember({"csv", "json"}));
    sweep_cmd->add_option("--out", sweep_spec.out_path, "output file (default stdout)");
    sweep_cmd->add_option("--threads", sweep_spec.threads, "worker threads");

    cli::TraceArgs trace_args;
    auto* trace_cmd = app.add_subcommand("trace", "sample one hypersurface S(e^{i theta})");
    trace_cmd->add_option("--theta", trace_args.theta)->required();
    trace_cmd->add_option("--p", trace_args.p)->required();
    trace_cmd->add_option("--q", trace_args.q)->required();
    trace_cmd->add_option("--nz", trace_args.nz, "generating parameters to sample");
    trace_cmd->add_option("--nlambda", trace_args.nlambda, "points per disk");
    trace_cmd->add_option("--out", trace_args.out_path, "output file (default stdout)");

    cli::SymcaraArgs sym_args;
    auto* sym_cmd = app.add_subcommand("symcara", "Caratheodory metric of the symmetrized bidisk");
    sym_cmd->add_option("--a", sym_args.a, "first point as 's,p'")->required();
    sym_cmd->add_option("--b", sym_args.b, "second point (the pole)")->required();
    sym_cmd->add_flag("--oracle", sym_args.oracle, "also run the Agler-Young supremum");
    sym_cmd->add_option("--grid", sym_args.grid, "oracle grid size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return cli::kExitUsage;
    }

    try {
        if (*green_cmd) return cli::cmd_green(green_args, std::cout);
        if (*sweep_cmd) {
            if (domain_name == "bidisk-eval-grid")
                sweep_spec.domain = cli::SweepDomain::BidiskEvalGrid;
            else if (domain_name == "sym-bidisk-grid")
                sweep_spec.domain = cli::SweepDomain::SymBidiskGrid;
            else
                sweep_spec.domain = cli::SweepDomain::AxisZGrid;
            return cli::cmd_sweep(sweep_spec, std::cout);
        }
        if (*trace_cmd) return cli::cmd_trace(trace_args, std::cout);
        if (*sym_cmd) return cli::cmd_symcara(sym_args, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::exit_code_for(e);
    }
    return cli::kExitUsage;
}
