#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "opfcut/driver.hpp"
#include "opfcut/network.hpp"
#include "opfcut/perturb.hpp"
#include "opfcut/relaxation.hpp"
#include "opfcut/report.hpp"
#include "opfcut/store.hpp"
#include "support/newton_pf.hpp"
#include "support/oracles.hpp"

using namespace opfcut;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out, err;
};

fs::path work_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("opfcut_wb_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spit(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    REQUIRE(out.good());
    out << content;
}

CliResult run_cli(const std::string& args) {
    const char* bin = std::getenv("OPFCUT_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "OPFCUT_BIN must point at the binary");
    const fs::path out = work_dir() / "stdout.txt";
    const fs::path err = work_dir() / "stderr.txt";
    const std::string cmd = std::string(bin) + " " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int rc = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

Cut sample_cut(CutFamily fam, int from, int to, bool to_side = false) {
    Cut cut;
    cut.family = fam;
    cut.from = from;
    cut.to = to;
    cut.to_side = to_side;
    cut.normal = fam == CutFamily::Limit
                     ? std::array<double, 4>{0.6, 0.8, 0.0, 0.0}
                     : std::array<double, 4>{2.0 / 3.0, 1.0 / 3.0, -1.0 / 3.0,
                                             -0.5443310539518174};
    cut.rhs = fam == CutFamily::Limit ? 2.5 : 0.0;
    cut.birth_round = 3;
    return cut;
}

}  // namespace

TEST_CASE("cut stores serialize and parse without losing a bit") {
    CutStore store;
    store.digest = "0123456789abcdef";
    store.case_name = "case9";
    store.cuts = {sample_cut(CutFamily::Jabr, 1, 4),
                  sample_cut(CutFamily::I2, 8, 9),
                  sample_cut(CutFamily::Limit, 4, 5, false),
                  sample_cut(CutFamily::Limit, 4, 5, true)};
    store.cuts[0].rhs = 1.0 / 3.0;  // not representable in decimal shorthand

    const std::string text = serialize_store(store);
    CHECK(text.rfind("CSTORE 1\n", 0) == 0);
    CHECK(text.find("case 0123456789abcdef case9\n") != std::string::npos);
    CHECK(text.find("cut jabr 1 4 c:") != std::string::npos);
    CHECK(text.find("cut i2 8 9 Pf:") != std::string::npos);
    CHECK(text.find("cut limit 4 5 Pf:") != std::string::npos);
    CHECK(text.find("cut limit 4 5 Pt:") != std::string::npos);

    CutStore back = parse_store(text);
    CHECK(back.version == 1);
    CHECK(back.digest == store.digest);
    CHECK(back.case_name == store.case_name);
    REQUIRE(back.cuts.size() == store.cuts.size());
    for (std::size_t i = 0; i < store.cuts.size(); ++i) {
        CAPTURE(i);
        CHECK(back.cuts[i].family == store.cuts[i].family);
        CHECK(back.cuts[i].from == store.cuts[i].from);
        CHECK(back.cuts[i].to == store.cuts[i].to);
        CHECK(back.cuts[i].to_side == store.cuts[i].to_side);
        for (int k = 0; k < 4; ++k)
            CHECK(back.cuts[i].normal[static_cast<std::size_t>(k)] ==
                  store.cuts[i].normal[static_cast<std::size_t>(k)]);
        CHECK(back.cuts[i].rhs == store.cuts[i].rhs);
        CHECK(back.cuts[i].birth_round == store.cuts[i].birth_round);
    }
}

TEST_CASE("store parser rejects structural damage with line numbers") {
    auto reject = [](const std::string& text, const char* needle) {
        try {
            parse_store(text);
            FAIL_CHECK("expected a throw for: " << needle);
        } catch (const std::runtime_error& e) {
            const std::string what = e.what();
            CAPTURE(what);
            CHECK(what.find("line") != std::string::npos);
            CHECK(what.find(needle) != std::string::npos);
        }
    };
    const std::string head = "CSTORE 1\ncase 0123456789abcdef case9\n";
    reject("", "empty store");
    reject("BOGUS 1\n", "CSTORE");
    reject("CSTORE 7\n", "unsupported store version");
    reject("CSTORE 1\n", "missing case header");
    reject(head + "cut nope 1 2 c:1 s:0 v2f:0 v2t:0 rhs 0 round 1\n",
           "unknown cut family");
    reject(head + "cut jabr 1 2 c:1 s:0 v2f:0 v2t:0\n", "misses 'rhs'");
    reject(head + "cut jabr 1 2 c:1 s:0 v2f:0 v2t:0 rhs 0 wat 1\n",
           "expected 'rhs <v> round <n>'");
    reject(head + "cut jabr 1 2 c:1 s:0 v2f:0 rhs 0 round 1\n",
           "wrong role set");
    reject(head + "cut jabr 1 2 c:1 c:2 s:0 v2f:0 v2t:0 rhs 0 round 1\n",
           "duplicate role");
    reject(head + "cut jabr 1 2 Pf:1 Qf:0 v2f:0 i2:0 rhs 0 round 1\n",
           "missing role");
    reject(head + "cut jabr 1 2 c:zap s:0 v2f:0 v2t:0 rhs 0 round 1\n",
           "bad number");
    reject(head + "cut jabr 1 2 c:0 s:0 v2f:0 v2t:0 rhs 0 round 1\n",
           "zero cut normal");
    reject(head + "bogus record\n", "expected a cut record");
}

TEST_CASE("imports filter to branches the target case still runs") {
    NetworkCase net = testsup::load_fixture("case9.m");
    CutStore store;
    store.digest = net.id;
    store.case_name = net.name;
    store.cuts = {sample_cut(CutFamily::Jabr, 8, 2),
                  sample_cut(CutFamily::I2, 8, 2),
                  sample_cut(CutFamily::Jabr, 4, 5),
                  sample_cut(CutFamily::Jabr, 2, 8)};  // reversed: no match

    SUBCASE("full case keeps exact-direction matches") {
        ImportResult imp = import_cuts(store, net);
        CHECK(imp.cuts.size() == 3);
        CHECK(imp.skipped == 1);
        CHECK(imp.warnings.empty());
        for (const Cut& c : imp.cuts) {
            CHECK(c.birth_round == 0);
            CHECK(c.last_tight_round == 0);
        }
    }

    SUBCASE("disabled branches drop exactly their cuts") {
        NetworkCase off = branch_off(net, 8, 2);
        ImportResult imp = import_cuts(store, off);
        CHECK(imp.cuts.size() == 1);
        CHECK(imp.cuts[0].from == 4);
        CHECK(imp.skipped == 3);
        // the twin's digest differs, which merits a warning, not an error
        bool digest_note = false;
        for (const auto& w : imp.warnings)
            if (w.find("digest") != std::string::npos) digest_note = true;
        CHECK(digest_note);
    }

    SUBCASE("limit cuts die when the rating moved down") {
        CutStore lim;
        lim.digest = net.id;
        lim.case_name = net.name;
        lim.cuts = {sample_cut(CutFamily::Limit, 4, 5)};
        lim.cuts[0].rhs = 2.5;  // rating at export time

        NetworkCase derated = net;
        derated.branches[1].U = 2.0;  // below the stored rhs: cut stays valid
        derated = finalize_case(std::move(derated));
        ImportResult ok = import_cuts(lim, derated);
        CHECK(ok.cuts.size() == 1);

        NetworkCase uprated = net;
        uprated.branches[1].U = 3.0;  // above the stored rhs: cut would bite
        uprated = finalize_case(std::move(uprated));
        ImportResult gone = import_cuts(lim, uprated);
        CHECK(gone.cuts.empty());
        CHECK(gone.skipped == 1);
        bool noted = false;
        for (const auto& w : gone.warnings)
            if (w.find("rating changed") != std::string::npos) noted = true;
        CHECK(noted);

        NetworkCase unlimited = net;
        unlimited.branches[1].U.reset();
        unlimited = finalize_case(std::move(unlimited));
        CHECK(import_cuts(lim, unlimited).cuts.empty());
    }
}

TEST_CASE("the seeded generator is portable and stable") {
    SplitMix64 rng(0);
    CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
    CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
    CHECK(rng.next() == 0x06C45D188009454FULL);

    SplitMix64 u(123);
    for (int i = 0; i < 1000; ++i) {
        const double v = u.uniform01();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }

    SplitMix64 g(7);
    double mean = 0.0, var = 0.0;
    const int n = 20000;
    std::vector<double> draws;
    for (int i = 0; i < n; ++i) draws.push_back(gaussian(g));
    for (double d : draws) mean += d;
    mean /= n;
    for (double d : draws) var += (d - mean) * (d - mean);
    var /= n - 1;
    CHECK(std::fabs(mean) < 0.03);
    CHECK(std::fabs(var - 1.0) < 0.05);
}

TEST_CASE("load perturbation is deterministic and one-sided on zeros") {
    NetworkCase net = testsup::load_fixture("case9.m");
    NetworkCase a = perturb_loads(net, 0);
    NetworkCase b = perturb_loads(net, 0);
    NetworkCase c = perturb_loads(net, 1);
    CHECK(a.id == b.id);
    CHECK(a.id != c.id);
    CHECK(a.id != net.id);

    for (std::size_t i = 0; i < net.buses.size(); ++i) {
        CAPTURE(i);
        CHECK(a.buses[i].Qd == net.buses[i].Qd);  // reactive load untouched
        CHECK(a.buses[i].Pd >= 0.0);
        if (net.buses[i].Pd == 0.0) CHECK(a.buses[i].Pd == 0.0);
        // drift stays around one percent: five sigma is a safe ceiling
        CHECK(std::fabs(a.buses[i].Pd - net.buses[i].Pd) <=
              0.01 * net.buses[i].Pd * 6.0 + 1e-15);
    }
}

TEST_CASE("branch off flips service and validates its arguments") {
    NetworkCase net = testsup::load_fixture("case9.m");
    NetworkCase off = branch_off(net, 8, 2);
    CHECK_FALSE(off.branches[6].in_service);
    CHECK(off.id != net.id);
    CHECK(net.branches[6].in_service);  // the original is untouched

    // reversed labels resolve to the same branch
    NetworkCase off2 = branch_off(net, 2, 8);
    CHECK(off2.id == off.id);

    CHECK_THROWS_AS(branch_off(net, 1, 9), std::exception);
    CHECK_THROWS_AS(branch_off(off, 8, 2), std::exception);  // already off
}

TEST_CASE("the busiest branch is the active-flow argmax") {
    NetworkCase net = testsup::load_fixture("case9.m");
    testsup::PfSpec spec;
    spec.slack_gen = 0;
    spec.pg_set = {0.0, 1.34, 0.94};
    spec.vm_set = {1.09, 1.09, 1.08};
    PrimalPoint p = testsup::solve_power_flow(net, spec);

    const int pick = busiest_branch(net, p);
    REQUIRE(pick >= 0);
    std::vector<BranchFlow> flows = branch_flows(net, p);
    for (std::size_t i = 0; i < flows.size(); ++i)
        CHECK(std::fabs(flows[static_cast<std::size_t>(pick)].Pf) >=
              std::fabs(flows[i].Pf) - 1e-15);

    NetworkCase flat = testsup::load_fixture("case2flat.m");
    PrimalPoint fp;
    fp.vm = {1.0, 1.0};
    fp.va = {0.0, 0.0};
    fp.pg = {0.0};
    fp.qg = {0.0};
    CHECK(busiest_branch(flat, fp) == 0);  // zero flow still beats nothing

    NetworkCase dark = branch_off(flat, 1, 2);
    CHECK(busiest_branch(dark, fp) == -1);
}

TEST_CASE("round logs format, parse back and summarize") {
    RunResult res;
    res.status = RunStatus::Stalled;
    res.bound = 5296.52215218110953;
    res.total_time = 1.75;
    RoundLog r1;
    r1.round = 1;
    r1.objective = 5100.0 + 1.0 / 3.0;
    r1.cuts_computed = 9;
    r1.cuts_added = 7;
    r1.cuts_dropped = 0;
    r1.cuts_rejected_parallel = 2;
    r1.solve_time = 0.5;
    r1.separation_time = 0.25;
    RoundLog r2 = r1;
    r2.round = 2;
    r2.objective = res.bound;
    r2.cuts_dropped = 3;
    res.rounds = {r1, r2};
    res.final_cuts.resize(13);

    const std::string text = format_round_logs(res);
    CHECK(text.find("round 1 obj ") == 0);
    CHECK(text.find(" computed 9 added 7 dropped 0 rejected 2 time 0.75\n") !=
          std::string::npos);
    CHECK(text.find("status Stalled bound ") != std::string::npos);
    CHECK(text.find(" active 13 time 1.75\n") != std::string::npos);

    RunResult back = parse_round_log(text);
    CHECK(back.status == res.status);
    CHECK(back.bound == res.bound);  // 17 digits survive
    CHECK(back.total_time == doctest::Approx(1.75));
    CHECK_FALSE(back.starred);
    REQUIRE(back.rounds.size() == 2);
    CHECK(back.rounds[0].objective == r1.objective);
    CHECK(back.rounds[0].cuts_rejected_parallel == 2);
    CHECK(back.rounds[1].cuts_dropped == 3);

    res.starred = true;
    RunResult starred = parse_round_log(format_round_logs(res));
    CHECK(starred.starred);

    // infeasible bounds print as inf and parse back as such
    RunResult inf;
    inf.status = RunStatus::Infeasible;
    inf.bound = lp::kInf;
    const std::string inf_text = format_round_logs(inf);
    CHECK(inf_text.find("status Infeasible bound inf") != std::string::npos);
    CHECK(std::isinf(parse_round_log(inf_text).bound));

    auto reject = [](const std::string& t, const char* needle) {
        try {
            parse_round_log(t);
            FAIL_CHECK("expected a throw for: " << needle);
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    reject("", "misses its status line");
    reject("round 1 obj x computed 0 added 0 dropped 0 rejected 0 time 0\n"
           "status Converged bound 0 active 0 time 0\n",
           "bad number 'x'");
    reject("status Converged bound 0 active 0 time 0\nround 1\n",
           "content after the status line");
    reject("status Wat bound 0 active 0 time 0\n", "unknown status");
}

TEST_CASE("summary tables carry gaps, stars and infeasibility") {
    RunResult res;
    res.status = RunStatus::Converged;
    res.bound = 2643.7348947837786;
    res.total_time = 0.05;
    RoundLog r;
    r.round = 1;
    r.objective = res.bound;
    r.cuts_computed = 4;
    r.cuts_added = 4;
    res.rounds = {r};

    std::string plain = report_table(res, std::nullopt);
    CHECK(plain.find("Objective") != std::string::npos);
    CHECK(plain.find("2643.7349") != std::string::npos);
    CHECK(plain.find("Gap") == std::string::npos);

    std::string gap = report_table(res, 2643.7548988723);
    CHECK(gap.find("Primal") != std::string::npos);
    CHECK(gap.find("0.00%") != std::string::npos);  // tiny but printed

    std::string wide = report_table(res, 3000.0);
    // (3000 - 2643.7349) / 3000 is 11.88 percent
    CHECK(wide.find("11.88%") != std::string::npos);

    res.starred = true;
    CHECK(report_table(res, std::nullopt).find("2643.7349*") != std::string::npos);

    RunResult inf;
    inf.status = RunStatus::Infeasible;
    inf.bound = lp::kInf;
    std::string table = report_table(inf, 100.0);
    CHECK(table.find("INF") != std::string::npos);
    CHECK(table.find('-') != std::string::npos);
}

TEST_CASE("cli solves, exports, warm starts and reports") {
    const std::string case2 = testsup::fixture_path("case2.m");
    const fs::path store_path = work_dir() / "case2.cuts";
    const fs::path log_path = work_dir() / "case2.log";

    CliResult solve = run_cli("solve --case " + case2 +
                              " --seed-envelopes --export-cuts " +
                              store_path.string() + " --log " + log_path.string() +
                              " --params segments=150");
    CHECK(solve.exit_code == 0);
    CHECK(solve.out.find("round 1 obj ") != std::string::npos);
    CHECK(solve.out.find("status Converged bound ") != std::string::npos);
    CHECK(solve.out.find("Objective") != std::string::npos);

    // the log file holds exactly the log section of stdout
    const std::string logs = slurp(log_path);
    CHECK(solve.out.rfind(logs, 0) == 0);
    RunResult parsed = parse_round_log(logs);
    CHECK(parsed.status == RunStatus::Converged);
    CHECK(parsed.bound > 2600.0);

    // exported store parses and drives a warm restart to the same bound
    CutStore store = parse_store(slurp(store_path));
    CHECK(store.cuts.size() >= 3);
    CliResult warm = run_cli("solve --case " + case2 + " --warm-start " +
                             store_path.string() + " --params segments=150");
    CHECK(warm.exit_code == 0);
    RunResult warm_parsed = parse_round_log(
        warm.out.substr(0, warm.out.find("\n\n") + 1));
    CHECK(std::fabs(warm_parsed.bound - parsed.bound) <=
          1e-5 * std::fabs(parsed.bound));
    CHECK(warm_parsed.rounds.size() <= parsed.rounds.size());
}

TEST_CASE("cli gap column reflects a supplied primal point") {
    NetworkCase net = testsup::load_fixture("case2.m");
    testsup::PfSpec spec;
    spec.slack_gen = 0;
    spec.pg_set = {0.0};
    spec.vm_set = {1.05};
    PrimalPoint point = testsup::solve_power_flow(net, spec);
    const fs::path primal_path = work_dir() / "case2.point";
    spit(primal_path, write_primal_point(point, net));

    CliResult r = run_cli("solve --case " + testsup::fixture_path("case2.m") +
                          " --seed-envelopes --params segments=150 --primal " +
                          primal_path.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("Gap") != std::string::npos);
    CHECK(r.err.find("primal point: objective") != std::string::npos);
    CHECK(r.out.find("0.00%") != std::string::npos);  // bound is nearly tight
}

TEST_CASE("cli perturbs loads deterministically") {
    const std::string case9 = testsup::fixture_path("case9.m");
    const fs::path twin_a = work_dir() / "twin_a.m";
    const fs::path twin_b = work_dir() / "twin_b.m";
    const fs::path twin_c = work_dir() / "twin_c.m";

    CHECK(run_cli("perturb --case " + case9 + " --mode loads --seed 7 --out " +
                  twin_a.string())
              .exit_code == 0);
    CHECK(run_cli("perturb --case " + case9 + " --mode loads --seed 7 --out " +
                  twin_b.string())
              .exit_code == 0);
    CHECK(run_cli("perturb --case " + case9 + " --mode loads --seed 8 --out " +
                  twin_c.string())
              .exit_code == 0);
    const std::string a = slurp(twin_a);
    CHECK(a == slurp(twin_b));
    CHECK(a != slurp(twin_c));
    NetworkCase twin = parse_case(a);
    NetworkCase base = testsup::load_fixture("case9.m");
    CHECK(twin.buses[4].Pd != base.buses[4].Pd);
    CHECK(twin.buses[4].Qd == base.buses[4].Qd);
}

TEST_CASE("cli switches branches off by label or by flow") {
    const std::string case9 = testsup::fixture_path("case9.m");
    const fs::path off_path = work_dir() / "off82.m";
    CliResult r = run_cli("perturb --case " + case9 +
                          " --mode branch-off --branch 8,2 --out " +
                          off_path.string());
    CHECK(r.exit_code == 0);
    NetworkCase off = parse_case(slurp(off_path));
    CHECK_FALSE(off.branches[6].in_service);

    // by primal point: the note names the chosen branch
    NetworkCase net = testsup::load_fixture("case9.m");
    testsup::PfSpec spec;
    spec.slack_gen = 0;
    spec.pg_set = {0.0, 1.34, 0.94};
    spec.vm_set = {1.09, 1.09, 1.08};
    const fs::path primal_path = work_dir() / "case9.point";
    spit(primal_path, write_primal_point(testsup::solve_power_flow(net, spec), net));
    const fs::path busy_path = work_dir() / "busy.m";
    CliResult busy = run_cli("perturb --case " + case9 +
                             " --mode branch-off --primal " + primal_path.string() +
                             " --out " + busy_path.string());
    CHECK(busy.exit_code == 0);
    CHECK(busy.err.find("largest active flow") != std::string::npos);
    int off_count = 0;
    for (const auto& br : parse_case(slurp(busy_path)).branches)
        if (!br.in_service) ++off_count;
    CHECK(off_count == 1);

    // neither selector is an error the tool hides
    CliResult neither = run_cli("perturb --case " + case9 +
                                " --mode branch-off --out " + busy_path.string());
    CHECK(neither.exit_code == 2);
    CHECK(neither.err.find("error:") != std::string::npos);
}

TEST_CASE("cli solve returns one on certified infeasibility") {
    const std::string case9 = testsup::fixture_path("case9.m");
    const fs::path off_path = work_dir() / "island.m";
    REQUIRE(run_cli("perturb --case " + case9 +
                    " --mode branch-off --branch 8,2 --out " + off_path.string())
                .exit_code == 0);

    CliResult r = run_cli("solve --case " + off_path.string() + " --seed-envelopes");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("status Infeasible") != std::string::npos);
    CHECK(r.out.find("INF") != std::string::npos);
    CHECK(r.err.find("island") != std::string::npos);  // validation warned
}

TEST_CASE("cli report summarizes saved logs") {
    const fs::path log_path = work_dir() / "saved.log";
    spit(log_path,
         "round 1 obj 5100 computed 9 added 7 dropped 0 rejected 2 time 0.50\n"
         "round 2 obj 5296.5 computed 4 added 2 dropped 1 rejected 0 time 0.40\n"
         "status Stalled bound 5296.5 active 17 time 1.20\n");
    CliResult r = run_cli("report --log " + log_path.string() + " --primal 5298.05");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("5296.5000") != std::string::npos);
    CHECK(r.out.find("0.03%") != std::string::npos);
    CHECK(r.out.find("13") != std::string::npos);  // cumulative computed

    const fs::path inf_path = work_dir() / "inf.log";
    spit(inf_path, "status Infeasible bound inf active 0 time 0.01\n");
    CliResult inf = run_cli("report --log " + inf_path.string());
    CHECK(inf.exit_code == 0);
    CHECK(inf.out.find("INF") != std::string::npos);
}

TEST_CASE("cli rejects bad input with exit code two") {
    CliResult nofile = run_cli("solve --case /nonexistent/net.m");
    CHECK(nofile.exit_code == 2);
    CHECK(nofile.err.find("error:") != std::string::npos);

    CliResult badflag = run_cli("solve --case x --frobnicate");
    CHECK(badflag.exit_code == 2);

    CliResult nosub = run_cli("");
    CHECK(nosub.exit_code == 2);

    const fs::path broken = work_dir() / "broken.cuts";
    spit(broken, "CSTORE 1\ncase 0123456789abcdef case2\ncut jabr 1 2 c:zap\n");
    CliResult badstore = run_cli("solve --case " + testsup::fixture_path("case2.m") +
                                 " --warm-start " + broken.string());
    CHECK(badstore.exit_code == 2);
    CHECK(badstore.err.find("line 3") != std::string::npos);

    const fs::path badparam = work_dir() / "unused.m";
    CliResult unknown = run_cli("solve --case " + testsup::fixture_path("case2.m") +
                                " --params warp=9");
    CHECK(unknown.exit_code == 2);
    CHECK(unknown.err.find("unknown --params key") != std::string::npos);
}
