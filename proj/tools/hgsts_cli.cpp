#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "hgsts/coverdown.hpp"
#include "hgsts/core.hpp"
#include "hgsts/gadgets.hpp"
#include "hgsts/io.hpp"
#include "hgsts/pipeline.hpp"
#include "hgsts/process.hpp"
#include "hgsts/rng.hpp"

using namespace hgsts;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyNegative = 2;
constexpr int kExitStarved = 3;
constexpr int kExitParameter = 4;
constexpr int kExitParse = 5;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("HGSTS_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw ParameterError("HGSTS_SEED is not an integer");
        }
    }
    return 0;
}

struct ManifestWriter {
    KeyValueFile kv;
    std::string path;

    ManifestWriter(const std::string& command, std::uint64_t seed) {
        kv.set("command", command);
        kv.set("seed", seed);
        kv.set("version", std::string("hgsts 1.0"));
    }
    void param(const std::string& k, const std::string& v) { kv.set("param." + k, v); }
    void param(const std::string& k, std::int64_t v) { kv.set("param." + k, v); }
    void param(const std::string& k, int v) { kv.set("param." + k, std::int64_t{v}); }
    void param(const std::string& k, double v) { kv.set("param." + k, v); }
    void output(const std::string& name, const std::string& file) {
        kv.set("output." + name, file);
        kv.set("digest." + name, file_digest(file));
    }
    void input(const std::string& name, const std::string& file) {
        kv.set("input." + name, file);
        kv.set("digest." + name, file_digest(file));
    }
    void finish(double wall_seconds) {
        kv.set("wall_seconds", wall_seconds);
        if (path.empty()) return;
        std::ofstream f(path, std::ios::binary);
        kv.write(f);
    }
};

int cmd_verify(const std::string& path, int g_max) {
    TripleSystem sys;
    try {
        sys = read_sts_file(path);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    }
    auto steiner = verify_steiner(sys);
    auto cert = girth(sys, g_max);
    std::cout << "vertices: " << sys.n_vertices() << "\n";
    std::cout << "triples: " << sys.size() << "\n";
    std::cout << "steiner: " << (steiner.ok ? "yes" : "no") << "\n";
    if (!steiner.ok) {
        std::cout << "uncovered pairs: " << steiner.uncovered_total << "\n";
        for (auto [u, v] : steiner.uncovered)
            std::cout << "  uncovered " << u << " " << v << "\n";
        std::cout << "multiply covered pairs: " << steiner.multi_total << "\n";
        for (auto [u, v] : steiner.multi)
            std::cout << "  multiple " << u << " " << v << "\n";
    }
    std::cout << "girth: " << cert.to_string() << "\n";
    if (cert.witness) {
        std::cout << "witness:";
        for (const auto& t : cert.witness->triples)
            std::cout << " [" << t[0] << " " << t[1] << " " << t[2] << "]";
        std::cout << "\n";
    }
    return (steiner.ok && cert.exceeds_bound()) ? kExitOk : kExitVerifyNegative;
}

struct NibbleArgs {
    Vertex n = 100;
    int g = 6;
    std::uint64_t seed = 0;
    double coverage = 0.9;
    double beta = -1;
    std::int64_t checkpoint_every = 0;
    int trials = 1;
    int jobs = 1;
    std::string out_prefix = "nibble";
};

int run_one_nibble(const NibbleArgs& a, int trial, std::string& err) {
    try {
        std::uint64_t trial_seed =
            a.trials == 1 ? a.seed
                          : SeedSequence(a.seed)
                                .stream("cli/trial", static_cast<std::uint64_t>(trial))
                                .next_u64();
        ProcessOptions opt;
        opt.seed = trial_seed;
        opt.coverage = a.coverage;
        opt.beta = a.beta;
        opt.checkpoint_every = a.checkpoint_every;

        auto G = HostGraph::complete(a.n);
        auto A0 = all_triangles(a.n);
        ProcessResult res;
        if (a.g <= 5) {
            // no Erdos 4- or 5-configurations exist: plain triangle removal
            auto fam = ForbiddenFamily::of({}, true);
            res = run_process(G, A0, fam, opt);
        } else if (a.g == 6) {
            res = run_process_pasch(G, A0, opt);
        } else {
            // explicit enumeration: the family count grows like n^{j-3}, so
            // the workable hosts shrink quickly with g
            Vertex cap = a.g == 7 ? 14 : (a.g == 8 ? 10 : 9);
            if (a.n > cap)
                throw ParameterError(
                    "explicit families for g=" + std::to_string(a.g) +
                    " are enumerated exhaustively; capped at n <= " +
                    std::to_string(cap));
            auto sys = TripleSystem(a.n, A0);
            std::vector<std::vector<Triple>> raw;
            for (const auto& c : find_erdos_configs(sys, 6, a.g))
                raw.push_back(c.triples);
            auto fam = ForbiddenFamily::of_erdos_enumeration(std::move(raw));
            res = run_process(G, A0, fam, opt);
        }
        if (!res.posthoc_ok())
            throw InvariantError("post-hoc verification failed: " + res.posthoc_detail);

        std::string suffix = a.trials == 1 ? "" : "." + std::to_string(trial);
        std::string csv_path = a.out_prefix + suffix + ".csv";
        std::string sts_path = a.out_prefix + suffix + ".sts";
        {
            std::ofstream csv(csv_path, std::ios::binary);
            write_trace_csv(csv, res);
        }
        TripleSystem chosen(a.n, res.chosen);
        write_sts_file(sts_path, chosen,
                       {"chosen by the high-girth process, steps=" +
                        std::to_string(res.steps)});
        return res.outcome == ProcessOutcome::ReachedCutoff ? kExitOk : kExitStarved;
    } catch (const ParameterError& e) {
        err = e.what();
        return kExitParameter;
    } catch (const std::exception& e) {
        err = e.what();
        return 1;
    }
}

int cmd_nibble(const NibbleArgs& a) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<int> codes(static_cast<std::size_t>(a.trials), 0);
    std::vector<std::string> errs(static_cast<std::size_t>(a.trials));
    int jobs = std::max(1, a.jobs);
    for (int base = 0; base < a.trials; base += jobs) {
        std::vector<std::thread> pool;
        for (int t = base; t < std::min(a.trials, base + jobs); ++t)
            pool.emplace_back([&, t] {
                codes[static_cast<std::size_t>(t)] =
                    run_one_nibble(a, t, errs[static_cast<std::size_t>(t)]);
            });
        for (auto& th : pool) th.join();
    }
    int rc = kExitOk;
    for (int t = 0; t < a.trials; ++t) {
        int c = codes[static_cast<std::size_t>(t)];
        if (c == kExitParameter || c == 1) {
            std::cerr << "trial " << t << ": " << errs[static_cast<std::size_t>(t)] << "\n";
            return c == 1 ? 1 : kExitParameter;
        }
        if (c == kExitStarved) {
            std::cerr << "trial " << t << ": starved before the cutoff\n";
            rc = kExitStarved;
        }
    }
    ManifestWriter man("nibble", a.seed);
    man.param("n", static_cast<std::int64_t>(a.n));
    man.param("g", a.g);
    man.param("coverage", a.coverage);
    man.param("trials", a.trials);
    for (int t = 0; t < a.trials; ++t) {
        std::string suffix = a.trials == 1 ? "" : "." + std::to_string(t);
        man.output("csv" + suffix, a.out_prefix + suffix + ".csv");
        man.output("sts" + suffix, a.out_prefix + suffix + ".sts");
    }
    man.path = a.out_prefix + ".manifest";
    man.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return rc;
}

int cmd_generate(Vertex n, int g, std::uint64_t seed, int retries,
                 const std::string& out) {
    auto t0 = std::chrono::steady_clock::now();
    GenerateOptions opt;
    opt.seed = seed;
    opt.retries = retries;
    auto sys = generate_sts(n, g, opt);
    if (!sys) {
        std::cerr << "generate: girth bound not met for n="
                  << n << " with g=" << g << " after " << retries << " retries (stage: backtracking)\n";
        return kExitStarved;
    }
    // write-after-verify: the caller-facing checks run before any output
    auto steiner = verify_steiner(*sys);
    auto cert = girth(*sys, g);
    if (!steiner.ok || !cert.exceeds_bound()) {
        std::cerr << "generate: internal verification failed, refusing to write\n";
        return 1;
    }
    write_sts_file(out, *sys, {"generated, girth verified > " + std::to_string(g)});
    ManifestWriter man("generate", seed);
    man.param("n", static_cast<std::int64_t>(n));
    man.param("g", g);
    man.param("retries", retries);
    man.output("sts", out);
    man.path = out + ".manifest";
    man.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    std::cout << "wrote " << out << " (" << sys->size() << " triples, girth > " << g
              << ")\n";
    return kExitOk;
}

int cmd_gadget_sphere(int g, const std::string& out) {
    VertexAllocator alloc(3);
    auto s = build_sphere(Triple(0, 1, 2), g, alloc);
    std::ostringstream os;
    os << "gadget sphere g=" << g << " anchor=0 1 2 new-vertices=" << (2 * g - 1)
       << "\n";
    os << "# out-decomposition (" << s.out_decomp.size() << " triangles)\n";
    for (const auto& t : s.out_decomp)
        os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    os << "# in-decomposition (" << s.in_decomp.size() << " triangles)\n";
    for (const auto& t : s.in_decomp)
        os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    if (out.empty())
        std::cout << os.str();
    else {
        std::ofstream f(out, std::ios::binary);
        f << os.str();
    }
    return kExitOk;
}

int cmd_gadget_pathcover(int x, const std::string& out) {
    std::vector<Vertex> base;
    for (int i = 0; i < x; ++i) base.push_back(static_cast<Vertex>(i));
    VertexAllocator alloc(static_cast<Vertex>(x));
    auto pc = build_path_cover(base, alloc);
    std::ostringstream os;
    os << "gadget pathcover x=" << x << " vertices=" << pc.total_vertices()
       << " midpoints-per-pair=" << pc.per_pair() << "\n";
    for (const auto& [u, v] : pc.edges()) os << u << ' ' << v << '\n';
    if (out.empty())
        std::cout << os.str();
    else {
        std::ofstream f(out, std::ios::binary);
        f << os.str();
    }
    return kExitOk;
}

int cmd_gadget_spherecover(int z, int g, const std::string& l_spec,
                           const std::string& out) {
    std::vector<Triple> ltriples;
    if (!l_spec.empty()) {
        std::istringstream ls(l_spec);
        std::string part;
        while (std::getline(ls, part, ';')) {
            std::istringstream ps(part);
            long long a, b, c;
            if (!(ps >> a >> b >> c)) throw ParameterError("bad --L triple spec");
            ltriples.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(b),
                                  static_cast<Vertex>(c));
        }
    }
    TripleSystem zsys(static_cast<Vertex>(z), ltriples);
    auto dec = sphere_cover_decompose(zsys, g);
    std::ostringstream os;
    os << "gadget spherecover z=" << z << " g=" << g << " base-triples=" << zsys.size()
       << "\n";
    write_sts(os, dec);
    if (out.empty())
        std::cout << os.str();
    else {
        std::ofstream f(out, std::ios::binary);
        f << os.str();
    }
    return kExitOk;
}

int cmd_gadget_cycledecomp(int x, std::uint64_t seed, const std::string& out) {
    std::vector<Vertex> base;
    for (int i = 0; i < x; ++i) base.push_back(static_cast<Vertex>(i));
    VertexAllocator alloc(static_cast<Vertex>(x));
    auto pc = build_path_cover(base, alloc);
    // random even graph on the base set
    auto rng = SeedSequence(seed).stream("cli/cycledecomp");
    std::set<std::pair<Vertex, Vertex>> edges;
    for (std::size_t a = 0; a < base.size(); ++a)
        for (std::size_t b = a + 1; b < base.size(); ++b)
            if (rng.bernoulli(0.5)) edges.insert({base[a], base[b]});
    for (;;) {
        std::map<Vertex, int> deg;
        for (const auto& [u, v] : edges) {
            ++deg[u];
            ++deg[v];
        }
        std::vector<Vertex> odd;
        for (Vertex v : base)
            if (deg[v] % 2) odd.push_back(v);
        if (odd.empty()) break;
        auto e = std::make_pair(std::min(odd[0], odd[1]), std::max(odd[0], odd[1]));
        if (edges.count(e))
            edges.erase(e);
        else
            edges.insert(e);
    }
    auto dec = decompose_short_cycles(EdgePairList(edges.begin(), edges.end()), pc);
    std::ostringstream os;
    os << "gadget cycledecomp x=" << x << " l-edges=" << edges.size()
       << " cycles=" << dec.cycles.size() << "\n";
    for (const auto& cyc : dec.cycles) {
        for (std::size_t i = 0; i < cyc.size(); ++i) os << (i ? " " : "") << cyc[i];
        os << '\n';
    }
    if (out.empty())
        std::cout << os.str();
    else {
        std::ofstream f(out, std::ios::binary);
        f << os.str();
    }
    return kExitOk;
}

int cmd_count_erdos(int j) {
    std::cout << count_erd_j(j) << "\n";
    return kExitOk;
}

int cmd_bound(std::int64_t N, int g, double c, const std::string& erd_file) {
    std::map<int, std::int64_t> erd;
    if (!erd_file.empty()) {
        std::ifstream f(erd_file);
        if (!f) {
            std::cerr << "parse error: cannot open " << erd_file << "\n";
            return kExitParse;
        }
        auto kv = KeyValueFile::read(f, erd_file);
        for (const auto& [k, v] : kv.items)
            if (k.rfind("erd_", 0) == 0)
                erd[std::stoi(k.substr(4))] = std::stoll(v);
    } else if (g >= 6) {
        throw ParameterError(
            "g >= 6 needs --erd-file with erd_6..erd_g entries (see count-erdos)");
    }
    double v = counting_lower_bound_log(N, g, erd, c);
    std::cout << format_real(v) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"high-girth Steiner triple system toolkit"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    bool seed_given = false;

    // verify
    auto* verify = app.add_subcommand("verify", "check a system file: Steiner + girth");
    std::string verify_path;
    int verify_gmax = 6;
    verify->add_option("file", verify_path, "sts file")->required();
    verify->add_option("--g-max", verify_gmax, "girth search bound");

    // nibble
    NibbleArgs nib;
    auto* nibble = app.add_subcommand("nibble", "run the high-girth triple process");
    nibble->add_option("--n", nib.n, "vertex count")->required();
    nibble->add_option("--g", nib.g, "girth bound (4..10)");
    nibble->add_option("--seed", seed)->each([&](const std::string&) { seed_given = true; });
    nibble->add_option("--coverage", nib.coverage, "stop at this edge fraction");
    nibble->add_option("--beta", nib.beta, "cutoff via (1-n^-beta)|E|/3");
    nibble->add_option("--checkpoint-every", nib.checkpoint_every);
    nibble->add_option("--trials", nib.trials);
    nibble->add_option("--jobs", nib.jobs);
    nibble->add_option("--out-prefix", nib.out_prefix);

    // gadget
    auto* gadget = app.add_subcommand("gadget", "emit an absorber gadget");
    gadget->require_subcommand(1);
    int sphere_g = 5, pc_x = 2, sc_z = 5, sc_g = 4, cd_x = 4;
    std::string gadget_out, sc_L;
    auto* gsphere = gadget->add_subcommand("sphere");
    gsphere->add_option("--g", sphere_g);
    gsphere->add_option("--out", gadget_out);
    auto* gpath = gadget->add_subcommand("pathcover");
    gpath->add_option("--x", pc_x);
    gpath->add_option("--out", gadget_out);
    auto* gcover = gadget->add_subcommand("spherecover");
    gcover->add_option("--z", sc_z);
    gcover->add_option("--g", sc_g);
    gcover->add_option("--L", sc_L, "semicolon-separated base triples");
    gcover->add_option("--out", gadget_out);
    auto* gcycle = gadget->add_subcommand("cycledecomp");
    gcycle->add_option("--x", cd_x);
    gcycle->add_option("--seed", seed)->each([&](const std::string&) { seed_given = true; });
    gcycle->add_option("--out", gadget_out);

    // count-erdos
    auto* count = app.add_subcommand("count-erdos", "count labeled girth-j configurations");
    int count_j = 6;
    count->add_option("--j", count_j)->required();

    // bound
    auto* bound = app.add_subcommand("bound", "counting lower bound, log form");
    std::int64_t bound_N = 7;
    int bound_g = 5;
    double bound_c = 0;
    std::string bound_erd;
    bound->add_option("--N", bound_N)->required();
    bound->add_option("--g", bound_g);
    bound->add_option("--c", bound_c);
    bound->add_option("--erd-file", bound_erd);

    // generate
    auto* gen = app.add_subcommand("generate", "construct a verified system");
    Vertex gen_n = 15;
    int gen_g = 6, gen_retries = 40;
    std::string gen_out = "out.sts", gen_config;
    gen->add_option("--n", gen_n);
    gen->add_option("--g", gen_g);
    gen->add_option("--seed", seed)->each([&](const std::string&) { seed_given = true; });
    gen->add_option("--retries", gen_retries);
    gen->add_option("--out", gen_out);
    gen->add_option("--config", gen_config, "pipeline config file (flags win)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitParameter;
    }

    try {
        if (!seed_given) seed = default_seed();
        if (*verify) return cmd_verify(verify_path, verify_gmax);
        if (*nibble) {
            nib.seed = seed;
            return cmd_nibble(nib);
        }
        if (*gadget) {
            if (*gsphere) return cmd_gadget_sphere(sphere_g, gadget_out);
            if (*gpath) return cmd_gadget_pathcover(pc_x, gadget_out);
            if (*gcover) return cmd_gadget_spherecover(sc_z, sc_g, sc_L, gadget_out);
            if (*gcycle) return cmd_gadget_cycledecomp(cd_x, seed, gadget_out);
        }
        if (*count) return cmd_count_erdos(count_j);
        if (*bound) return cmd_bound(bound_N, bound_g, bound_c, bound_erd);
        if (*gen) {
            if (!gen_config.empty()) {
                std::ifstream f(gen_config);
                if (!f) {
                    std::cerr << "parse error: cannot open " << gen_config << "\n";
                    return kExitParse;
                }
                auto cfg = PipelineConfig::from_kv(KeyValueFile::read(f, gen_config));
                for (const auto& w : cfg.warnings)
                    std::cerr << "config warning: " << w << "\n";
                if (!gen->count("--n") && cfg.n > 0) gen_n = cfg.n;
                if (!gen->count("--g")) gen_g = cfg.g;
                if (!gen->count("--seed")) seed = cfg.seed;
                if (!gen->count("--retries")) gen_retries = cfg.retries;
            }
            return cmd_generate(gen_n, gen_g, seed, gen_retries, gen_out);
        }
    } catch (const ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return kExitParameter;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
