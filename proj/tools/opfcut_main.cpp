#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "opfcut/driver.hpp"
#include "opfcut/network.hpp"
#include "opfcut/perturb.hpp"
#include "opfcut/relaxation.hpp"
#include "opfcut/report.hpp"
#include "opfcut/store.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

struct ParamSet {
    opfcut::DriverParams driver;
    opfcut::BuildOptions build;
};

void apply_params(ParamSet& p, const std::vector<std::string>& kvs) {
    for (const std::string& kv : kvs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("--params expects key=value, got '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        std::size_t used = 0;
        const double v = std::stod(val, &used);
        if (used != val.size())
            throw std::runtime_error("bad value for " + key + ": '" + val + "'");

        opfcut::CutPolicy& pol = p.driver.policy;
        if (key == "eps") pol.eps_violation = v;
        else if (key == "p_jabr") pol.p_jabr = v;
        else if (key == "p_i2") pol.p_i2 = v;
        else if (key == "p_limit") pol.p_limit = v;
        else if (key == "t_age") pol.t_age = static_cast<int>(v);
        else if (key == "eps_par") pol.eps_parallel = v;
        else if (key == "eps_slack") pol.eps_slack = v;
        else if (key == "eps_ftol") p.driver.eps_ftol = v;
        else if (key == "t_ftol") p.driver.stall_limit = static_cast<int>(v);
        else if (key == "segments") p.build.cost_segments = static_cast<int>(v);
        else if (key == "feas_tol") p.driver.tol.feasibility = v;
        else if (key == "opt_tol") p.driver.tol.optimality = v;
        else throw std::runtime_error("unknown --params key '" + key + "'");
    }
}

opfcut::NetworkCase load_case(const std::string& path) {
    std::vector<std::string> parse_warnings;
    opfcut::NetworkCase net = opfcut::parse_case(read_file(path), &parse_warnings);
    for (const std::string& w : parse_warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& d : opfcut::validate_case(net)) {
        const char* tag =
            d.severity == opfcut::Diagnostic::Severity::Warning ? "warning" : "note";
        std::cerr << tag << ": " << d.message << '\n';
    }
    return net;
}

int cmd_solve(const std::string& case_path, const std::string& warm_path,
              const std::string& export_path, const std::string& log_path,
              const std::string& primal_path, double time_limit,
              std::optional<int> max_rounds, bool seed, const ParamSet& base) {
    ParamSet params = base;
    params.driver.time_limit = time_limit;
    params.driver.max_rounds = max_rounds;

    const opfcut::NetworkCase net = load_case(case_path);
    opfcut::ModelBundle bundle = opfcut::build_base_model(net, params.build);

    std::vector<opfcut::Cut> warm;
    if (seed) warm = opfcut::seed_envelopes(bundle);
    if (!warm_path.empty()) {
        const opfcut::CutStore store = opfcut::parse_store(read_file(warm_path));
        const opfcut::ImportResult imported = opfcut::import_cuts(store, net);
        for (const std::string& w : imported.warnings)
            std::cerr << "warning: " << w << '\n';
        if (imported.skipped > 0)
            std::cerr << "note: skipped " << imported.skipped
                      << " stored cut(s) without a matching in-service branch\n";
        warm.insert(warm.end(), imported.cuts.begin(), imported.cuts.end());
    }

    std::optional<double> primal_obj;
    if (!primal_path.empty()) {
        const opfcut::PrimalPoint point =
            opfcut::parse_primal_point(read_file(primal_path), net);
        const opfcut::ResidualReport rep = opfcut::acopf_residuals(net, point);
        std::cerr << "primal point: objective " << rep.objective
                  << ", max residual " << rep.max_violation() << '\n';
        if (rep.max_violation() > 1e-6)
            std::cerr << "warning: primal point violates constraints; the gap "
                         "column is indicative only\n";
        primal_obj = rep.objective;
    }

    const opfcut::RunResult result = opfcut::run(bundle, warm, params.driver);

    const std::string logs = opfcut::format_round_logs(result);
    std::cout << logs << '\n' << opfcut::report_table(result, primal_obj);
    if (!log_path.empty()) write_file(log_path, logs);
    if (!export_path.empty())
        write_file(export_path,
                   opfcut::serialize_store(opfcut::export_cuts(result, net)));
    return result.status == opfcut::RunStatus::Infeasible ? 1 : 0;
}

int cmd_perturb(const std::string& case_path, const std::string& mode,
                std::uint64_t rng_seed, const std::string& branch_arg,
                const std::string& primal_path, const std::string& out_path) {
    const opfcut::NetworkCase net = load_case(case_path);
    opfcut::NetworkCase out;
    if (mode == "loads") {
        out = opfcut::perturb_loads(net, rng_seed);
    } else if (mode == "branch-off") {
        int from = 0, to = 0;
        if (!branch_arg.empty()) {
            if (std::sscanf(branch_arg.c_str(), "%d,%d", &from, &to) != 2)
                throw std::runtime_error("--branch expects 'from,to'");
        } else if (!primal_path.empty()) {
            const opfcut::PrimalPoint point =
                opfcut::parse_primal_point(read_file(primal_path), net);
            const int bi = opfcut::busiest_branch(net, point);
            if (bi < 0) throw std::runtime_error("no in-service branch to turn off");
            from = net.branches[static_cast<std::size_t>(bi)].from_bus;
            to = net.branches[static_cast<std::size_t>(bi)].to_bus;
            std::cerr << "note: branch " << from << '-' << to
                      << " carries the largest active flow\n";
        } else {
            throw std::runtime_error("branch-off needs --branch or --primal");
        }
        out = opfcut::branch_off(net, from, to);
    } else {
        throw std::runtime_error("unknown mode '" + mode + "'");
    }
    write_file(out_path, opfcut::write_case(out));
    return 0;
}

int cmd_report(const std::string& log_path, std::optional<double> primal) {
    const opfcut::RunResult result = opfcut::parse_round_log(read_file(log_path));
    std::cout << opfcut::report_table(result, primal);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lower bounds for AC optimal power flow via outer-envelope "
                 "cutting planes over a linear base model"};
    app.require_subcommand(1);

    std::string case_path, warm_path, export_path, log_path, primal_path;
    double time_limit = 1000.0;
    std::optional<int> max_rounds;
    bool seed_env = false;
    std::vector<std::string> param_kvs;

    CLI::App* solve = app.add_subcommand("solve", "Run the cutting-plane loop");
    solve->add_option("--case", case_path, "case file (.m)")->required();
    solve->add_option("--warm-start", warm_path, "cut store to import");
    solve->add_option("--export-cuts", export_path, "write final active cuts here");
    solve->add_option("--log", log_path, "write round logs here");
    solve->add_option("--primal", primal_path,
                      "primal point file; adds a gap column to the report");
    solve->add_option("--time-limit", time_limit, "seconds, checked between rounds");
    solve->add_option("--max-rounds", max_rounds, "stop after this many rounds");
    solve->add_flag("--seed-envelopes", seed_env,
                    "start from one loss-envelope cut per branch");
    solve->add_option("--params", param_kvs,
                      "key=value overrides: eps p_jabr p_i2 p_limit t_age eps_par "
                      "eps_slack eps_ftol t_ftol segments feas_tol opt_tol");

    std::string mode, branch_arg, out_path, pcase_path, pprimal_path;
    std::uint64_t rng_seed = 0;
    CLI::App* perturb = app.add_subcommand("perturb", "Write a perturbed twin case");
    perturb->add_option("--case", pcase_path, "case file (.m)")->required();
    perturb->add_option("--mode", mode, "loads | branch-off")->required();
    perturb->add_option("--seed", rng_seed, "RNG seed for load noise");
    perturb->add_option("--branch", branch_arg, "from,to labels to switch off");
    perturb->add_option("--primal", pprimal_path,
                        "primal point used to pick the busiest branch");
    perturb->add_option("--out", out_path, "output case file")->required();

    std::string rlog_path;
    std::optional<double> rprimal;
    CLI::App* report = app.add_subcommand("report", "Summarize a round log");
    report->add_option("--log", rlog_path, "round log file")->required();
    report->add_option("--primal", rprimal, "primal objective for the gap column");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (solve->parsed()) {
            ParamSet params;
            apply_params(params, param_kvs);
            return cmd_solve(case_path, warm_path, export_path, log_path,
                             primal_path, time_limit, max_rounds, seed_env, params);
        }
        if (perturb->parsed())
            return cmd_perturb(pcase_path, mode, rng_seed, branch_arg, pprimal_path,
                               out_path);
        return cmd_report(rlog_path, rprimal);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
