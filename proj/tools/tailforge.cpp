// tailforge command-line front end.
//
// Exit codes: 0 ok, 1 an expectation failed, 2 usage, 3 numerical
// (tolerance, truncation, divergence, inconclusive bracket, low acceptance).

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tailforge/builtins.hpp"
#include "tailforge/classify.hpp"
#include "tailforge/convolve.hpp"
#include "tailforge/dist_spec.hpp"
#include "tailforge/errors.hpp"
#include "tailforge/experiments.hpp"
#include "tailforge/functionals.hpp"
#include "tailforge/io.hpp"
#include "tailforge/montecarlo.hpp"
#include "tailforge/sampling.hpp"
#include "tailforge/transform.hpp"

using namespace tailforge;
using nlohmann::json;

namespace {

enum Exit { ok = 0, expectation_failed = 1, usage = 2, numerical = 3 };

struct Globals {
    std::uint64_t seed = 20240617;
    double tol = 1e-9;
    std::string grid;
    std::string format;
    std::string out;
};

QuadConfig quad(const Globals& g) {
    QuadConfig q;
    q.rel_tol = g.tol;
    return q;
}

std::vector<double> grid_or(const Globals& g, const std::string& fallback) {
    return io::parse_grid(g.grid.empty() ? fallback : g.grid);
}

io::Format format_or(const Globals& g, io::Format fallback) {
    return g.format.empty() ? fallback : io::format_from_string(g.format);
}

void emit(const Globals& g, const std::string& text) {
    if (g.out.empty() || g.out == "-")
        std::cout << text;
    else
        io::write_file(g.out, text);
}

void emit_table(const Globals& g, const io::Table& t) {
    emit(g, format_or(g, io::Format::csv) == io::Format::csv ? t.csv() : io::dump(t.to_json()));
}

// "K=2,t=1" -> map
std::map<std::string, double> parse_params(const std::string& text) {
    std::map<std::string, double> out;
    if (text.empty()) return out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find(',', start), text.size());
        const std::string item = text.substr(start, end - start);
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos) throw ParameterError("parameter '" + item + "' is not key=value");
        try {
            out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw ParameterError("parameter '" + item + "' has a bad number");
        }
        start = end + 1;
    }
    return out;
}

double need(const std::map<std::string, double>& p, const std::string& key, const std::string& kind) {
    auto it = p.find(key);
    if (it == p.end()) throw ParameterError("--kind " + kind + " needs --params " + key + "=...");
    return it->second;
}

double get(const std::map<std::string, double>& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

int print_experiment(const ExperimentResult& r, const std::string& dir) {
    std::printf("%s: %s\n", r.id.c_str(), r.passed ? "all expectations hold" : "expectation failed");
    for (const auto& e : r.expectations)
        std::printf("  [%s] %s (%s)\n", e.holds ? "ok" : "FAIL", e.name.c_str(), e.detail.c_str());
    std::printf("  files in %s:", dir.c_str());
    for (const auto& f : r.files) std::printf(" %s", f.c_str());
    std::printf("\n");
    if (!r.passed) {
        std::fprintf(stderr, "first failed expectation: %s\n", r.first_failure().c_str());
        return expectation_failed;
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tailforge: tails of distributions on [0, inf), their gamma-transforms and class diagnostics"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "PRNG seed")->capture_default_str();
    app.add_option("--tol", g.tol, "relative quadrature tolerance")->capture_default_str();
    app.add_option("--grid", g.grid, "x grid: 1,2,5 | geom:lo:hi:n | lin:lo:hi:n");
    app.add_option("--format", g.format, "csv or json");
    app.add_option("--out", g.out, "output file (default stdout; a directory for experiment)");

    std::string dist_text;
    auto add_dist = [&](CLI::App* c) {
        c->add_option("--dist", dist_text, "kind:key=value,...[+gamma=g][+power=m] or a JSON spec file")->required();
    };

    // dist
    auto* dist = app.add_subcommand("dist", "inspect a distribution");
    dist->require_subcommand(1);
    auto* show = dist->add_subcommand("show", "print the distribution spec, segments and notices as JSON");
    add_dist(show);
    auto* eval = dist->add_subcommand("eval", "tail, log-tail and log-density on --grid");
    add_dist(eval);
    auto* samp = dist->add_subcommand("sample", "draw values by inverse transform");
    add_dist(samp);
    std::size_t count = 10;
    samp->add_option("--count", count, "number of draws")->capture_default_str();

    // transform
    auto* tr = app.add_subcommand("transform", "G = F e^(-gamma x): write a spec file for G, or compare logs on --grid");
    add_dist(tr);
    double gamma = 1.0;
    tr->add_option("--gamma", gamma, "tilt rate")->required();

    // conv
    auto* conv = app.add_subcommand("conv", "two-fold tail by quadrature, or n-fold staircase brackets with --step");
    add_dist(conv);
    int n = 2;
    double h = 0.0;
    std::string conv_x;
    conv->set_help_flag("--help", "Print this help message and exit");
    conv->add_option("--n", n, "number of summands")->capture_default_str();
    conv->add_option("--x", conv_x, "x values, same syntax as --grid");
    conv->add_option("--h,--step", h, "lattice step for brackets (rounded down to a power of two)");

    // functional
    auto* fn = app.add_subcommand("functional", "tail functional on --grid");
    add_dist(fn);
    std::string kind;
    std::string params;
    fn->add_option("--kind", kind, "t_ratio|b2|jump|ol|d|lgamma|os|osstar")->required();
    fn->add_option("--params", params, "K=..,t=..,gamma=..,n=..,h=..");

    // classify
    auto* cl = app.add_subcommand("classify", "evidence report for every class");
    add_dist(cl);
    std::string config_path;
    cl->add_option("--config", config_path, "JSON config (schema tailforge/classify@1)");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate of P(X_(n,1) > x - K | S_n > x)");
    add_dist(sim);
    double sx = 0, sK = 0;
    std::uint64_t samples = 100000;
    int sn = 2;
    sim->add_option("--n", sn, "number of summands")->capture_default_str();
    sim->add_option("--x", sx, "threshold")->required();
    sim->add_option("--K", sK, "jump slack")->required();
    sim->add_option("--samples", samples, "number of n-tuples")->capture_default_str();

    // experiment
    auto* ex = app.add_subcommand("experiment", "run a scripted scenario and write evidence tables");
    std::string ex_id;
    std::string from_summary;
    bool print_config = false;
    ex->add_option("id", ex_id, "prop-1.1 | prop-1.2 | prop-1.3 | prop-1.4 | thm-1.1");
    ex->add_option("--config", config_path, "JSON config (see --print-config)");
    ex->add_option("--from-summary", from_summary, "rerun the config embedded in a summary.json");
    ex->add_flag("--print-config", print_config, "print the default config and exit");

    // export
    auto* exp = app.add_subcommand("export", "write a ratio series (--kind) or a bracket grid (--n, --step) to --out");
    add_dist(exp);
    std::string ex_kind;
    double x_max = 0;
    exp->add_option("--kind", ex_kind, "ol|d|lgamma|os|osstar; omit for a bracket grid");
    exp->add_option("--params", params, "t=..,gamma=..");
    exp->add_option("--n", n, "summands for the bracket grid")->capture_default_str();
    exp->add_option("--step", h, "lattice step for the bracket grid");
    exp->add_option("--x-max", x_max, "largest lattice point");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : usage;
    }

    try {
        if (*ex) {
            if (print_config) {
                if (!is_experiment_id(ex_id)) throw ParameterError("unknown experiment id '" + ex_id + "'");
                std::cout << io::dump(default_experiment_config(ex_id));
                return ok;
            }
            json cfg;
            if (!from_summary.empty()) {
                const json s = json::parse(io::read_file(from_summary), nullptr, false);
                if (s.is_discarded() || !s.contains("config")) throw ParameterError(from_summary + " is not an experiment summary");
                cfg = s["config"];
            } else if (!config_path.empty()) {
                cfg = json::parse(io::read_file(config_path), nullptr, false);
                if (cfg.is_discarded()) throw ParameterError(config_path + " is not valid JSON");
            } else {
                if (!is_experiment_id(ex_id)) {
                    std::fprintf(stderr, "unknown experiment id '%s'; expected one of:", ex_id.c_str());
                    for (const auto& id : experiment_ids()) std::fprintf(stderr, " %s", id.c_str());
                    std::fprintf(stderr, "\n");
                    return usage;
                }
                cfg = default_experiment_config(ex_id);
                if (app.get_option("--seed")->count()) cfg["seed"] = g.seed;
                if (app.get_option("--tol")->count()) cfg["rel_tol"] = g.tol;
            }
            const std::string id = cfg.value("id", "");
            if (!is_experiment_id(id)) throw ParameterError("unknown experiment id '" + id + "'");
            const std::string dir = g.out.empty() ? "tailforge-" + id : g.out;
            return print_experiment(run_experiment(cfg, dir), dir);
        }

        const Distribution d = build(load_dist_spec(dist_text));
        const QuadConfig qc = quad(g);

        if (*show) {
            emit(g, io::dump(d.to_json()));
        } else if (*eval) {
            io::Table t{{"x", "log_tail", "tail", "log_density"}, {}};
            for (double x : grid_or(g, "0,1,2,5,10,100")) {
                const double L = d.log_tail(x);
                t.rows.push_back({io::fmt(x), io::fmt(L), io::fmt(std::exp(L)), io::fmt(d.log_density(x))});
            }
            emit_table(g, t);
        } else if (*samp) {
            io::Table t{{"value"}, {}};
            for (double v : sample(d, g.seed, count)) t.rows.push_back({io::fmt(v)});
            emit_table(g, t);
        } else if (*tr) {
            const Distribution G = gamma_transform(d, {gamma});
            if (g.grid.empty()) {
                emit(g, io::dump(to_json(G.spec())));
            } else {
                io::Table t{{"x", "log_tail_F", "log_tail_G", "residual"}, {}};
                for (double x : io::parse_grid(g.grid)) {
                    const double lf = d.log_tail(x), lg = G.log_tail(x);
                    t.rows.push_back({io::fmt(x), io::fmt(lf), io::fmt(lg), io::fmt(lg - (lf - gamma * x))});
                }
                emit_table(g, t);
            }
        } else if (*conv) {
            const std::vector<double> xs = io::parse_grid(!conv_x.empty() ? conv_x : g.grid.empty() ? "1,2,5,10,20" : g.grid);
            // log-domain bounds; the quadrature rows repeat one value in both columns
            io::Table t{{"x", "lower", "upper", "method"}, {}};
            if (h > 0 || n > 2) {
                if (!(h > 0)) throw ParameterError("conv with --n > 2 needs --h");
                const BracketGrid bg = io::cached_convn_tail_grid(d, n, *std::max_element(xs.begin(), xs.end()), h);
                for (double x : xs) {
                    const Bracket b = log_bracket_at(bg, x);
                    t.rows.push_back({io::fmt(x), io::fmt(b.lo), io::fmt(b.hi), "lattice"});
                }
            } else {
                for (double x : xs) {
                    const double lc = log_conv2_tail(d, x, qc);
                    t.rows.push_back({io::fmt(x), io::fmt(lc), io::fmt(lc), "quadrature"});
                }
            }
            emit_table(g, t);
        } else if (*fn) {
            const auto p = parse_params(params);
            const std::vector<double> xs = grid_or(g, "geom:4:1024:9");
            if (kind == "t_ratio" || kind == "b2") {
                const double K = need(p, "K", kind);
                DiagSeries s;
                s.name = kind;
                for (double x : xs) {
                    s.params.push_back(x);
                    s.values.push_back(kind == "b2" ? b2_cond(d, x, K, qc) : t_ratio(d, x, K, qc));
                }
                s.finish();
                if (format_or(g, io::Format::csv) == io::Format::json)
                    emit(g, io::dump(s.to_json()));
                else
                    emit(g, io::table(s).csv());
            } else if (kind == "jump") {
                JumpConfig jc;
                jc.h = get(p, "h", 0.0);
                const int jn = static_cast<int>(get(p, "n", 2));
                const double K = need(p, "K", kind);
                io::Table t{{"x", "lower", "upper"}, {}};
                for (double x : xs) {
                    const Bracket b = jump_cond(d, jn, x, K, jc);
                    t.rows.push_back({io::fmt(x), io::fmt(b.lo), io::fmt(b.hi)});
                }
                emit_table(g, t);
            } else {
                RatioSpec rs;
                rs.kind = ratio_kind_from_string(kind);
                rs.t = get(p, "t", 1.0);
                rs.gamma = get(p, "gamma", 0.0);
                const DiagSeries s = ratio_diagnostic(d, rs, xs, {}, qc);
                if (format_or(g, io::Format::csv) == io::Format::json)
                    emit(g, io::dump(s.to_json()));
                else
                    emit(g, io::table(s).csv());
            }
        } else if (*cl) {
            ClassifyConfig cfg;
            if (!config_path.empty()) {
                const json j = json::parse(io::read_file(config_path), nullptr, false);
                if (j.is_discarded()) throw ParameterError(config_path + " is not valid JSON");
                cfg = ClassifyConfig::from_json(j);
            }
            cfg.rel_tol = app.get_option("--tol")->count() ? g.tol : cfg.rel_tol;
            if (!g.grid.empty()) cfg.xgrid = io::parse_grid(g.grid);
            const ClassReport rep = classify(d, cfg);
            if (format_or(g, io::Format::json) == io::Format::csv) {
                io::Table t{{"class", "verdict", "reason"}, {}};
                for (const auto& e : rep.entries) t.rows.push_back({e.cls, to_string(e.verdict), "\"" + e.reason + "\""});
                emit(g, t.csv());
            } else {
                emit(g, io::dump(rep.to_json()));
            }
        } else if (*sim) {
            const McEstimate e = mc_jump_cond(d, sn, sx, sK, samples, g.seed);
            if (format_or(g, io::Format::json) == io::Format::csv) {
                io::Table t{{"estimate", "standard_error", "accepted", "total", "seed"}, {}};
                t.rows.push_back({io::fmt(e.estimate), io::fmt(e.standard_error), std::to_string(e.accepted),
                                  std::to_string(e.total), std::to_string(e.seed)});
                emit(g, t.csv());
            } else {
                emit(g, io::dump(e.to_json()));
            }
        } else if (*exp) {
            if (g.out.empty()) throw ParameterError("export needs --out");
            const io::Format f = format_or(g, io::Format::csv);
            if (!ex_kind.empty()) {
                const auto p = parse_params(params);
                RatioSpec rs;
                rs.kind = ratio_kind_from_string(ex_kind);
                rs.t = get(p, "t", 1.0);
                rs.gamma = get(p, "gamma", 0.0);
                io::export_grid(ratio_diagnostic(d, rs, grid_or(g, "geom:4:1024:9"), {}, qc), f, g.out);
            } else {
                if (!(h > 0) || !(x_max > 0)) throw ParameterError("bracket grid export needs --step and --x-max");
                io::export_grid(io::cached_convn_tail_grid(d, n, x_max, h), f, g.out);
            }
        }
        return ok;
    } catch (const ParameterError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return usage;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return usage;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return usage;
    } catch (const Error& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return numerical;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "error: malformed JSON input: %s\n", e.what());
        return usage;
    }
}
