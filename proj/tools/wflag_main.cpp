// wflag: exact combinatorics of (affine) Weyl groups — lengths, Bruhat
// order, Demazure products, Kazhdan-Lusztig data, Demazure-map fibers and
// decomposition multiplicities.
//
// Exit codes: 0 ok, 2 usage error, 3 resource cap exceeded, 4 verification
// (--check) failure.

#include <sys/file.h>
#include <unistd.h>

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "wflag/wflag.hpp"

namespace {

using namespace wflag;

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string group;
    std::string word;
    std::string u_word;
    std::string w_word;
    std::string para;
    std::string format = "json";
    std::string cache_path;
    bool check = false;
    int cap = 14;
};

void add_common(CLI::App* cmd, Options& o, bool with_cache = true) {
    cmd->add_option("--group", o.group, "group descriptor, e.g. A2, B2, A2~")->required();
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    cmd->add_option("--cap", o.cap, "interval length cap");
    cmd->add_flag("--check", o.check, "cross-validate against independent oracles");
    if (with_cache) cmd->add_option("--cache", o.cache_path, "KL cache file path");
}

std::string resolve_cache_path(const Options& o) {
    if (!o.cache_path.empty()) return o.cache_path;
    const char* env = std::getenv("WFLAG_CACHE");
    return env ? std::string(env) : std::string();
}

/// Exclusive advisory lock held for the lifetime of the run; on contention
/// the run proceeds without persistence (the cache is a pure memo).
struct CacheSession {
    std::string path;
    std::string group;
    int lock_fd = -1;
    CacheFile file;
    bool active = false;

    CacheSession(const Options& o, const std::string& group_in) : group(group_in) {
        path = resolve_cache_path(o);
        if (path.empty()) return;
        lock_fd = ::open(path.c_str(), O_RDWR | O_CREAT, 0644);
        if (lock_fd < 0) {
            std::cerr << "wflag: cannot open cache file '" << path << "', continuing uncached\n";
            return;
        }
        if (::flock(lock_fd, LOCK_EX | LOCK_NB) != 0) {
            std::cerr << "wflag: cache file busy, continuing uncached\n";
            ::close(lock_fd);
            lock_fd = -1;
            return;
        }
        active = true;
        if (auto loaded = load_cache(path, group)) file = *loaded;
        file.group = group;
    }

    ~CacheSession() {
        if (lock_fd >= 0) {
            ::flock(lock_fd, LOCK_UN);
            ::close(lock_fd);
        }
    }

    void seed(KLContext& ctx, const RootDatumPtr& d) const {
        if (!active) return;
        for (const auto& [key, poly] : file.entries) {
            const auto bar = key.find('|');
            if (bar == std::string::npos) continue;
            try {
                const WeylElement u = element_from_word(d, parse_word(key.substr(0, bar)));
                const WeylElement w = element_from_word(d, parse_word(key.substr(bar + 1)));
                ctx.seed_kl(u, w, poly);
            } catch (const std::exception&) {
                // ignore malformed entries
            }
        }
    }

    void absorb_and_save(KLContext& ctx) {
        if (!active) return;
        for (const auto& [u, w, p] : ctx.kl_entries())
            file.entries[element_word_string(u) + "|" + element_word_string(w)] = p;
        save_cache(path, file);
    }
};

void emit(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_info(const Options& o) {
    RootDatumPtr d = build_root_datum(o.group);
    ordered_json j;
    j["group"] = d->descriptor();
    j["rank"] = d->rank;
    j["affine"] = d->affine;
    j["positive_roots"] = d->n_positive;
    j["generators"] = d->generator_indices();
    j["omega"] = "trivial";  // cocharacter lattice fixed to the coroot lattice
    if (!d->affine) {
        std::vector<int> all;
        for (int i = 1; i <= d->rank; ++i) all.push_back(i);
        j["weyl_order"] = parabolic_subgroup(d, ParabolicSubset(all)).size();
    }
    if (o.format == "text") {
        std::cout << "group " << d->descriptor() << ": rank " << d->rank << ", "
                  << d->n_positive << " positive roots, generators "
                  << word_string(d->generator_indices()) << "\n";
    } else {
        emit(j);
    }
    return 0;
}

int cmd_demazure(const Options& o) {
    RootDatumPtr d = build_root_datum(o.group);
    const DemazureMapSpec spec = make_demazure_spec(d, parse_word(o.word));
    const std::string result = element_word_string(spec.target);
    if (o.format == "text") {
        std::cout << result << "\n";
    } else {
        ordered_json j;
        j["group"] = d->descriptor();
        j["word"] = spec.word;
        j["demazure"] = result;
        emit(j);
    }
    return 0;
}

int cmd_kl(const Options& o) {
    RootDatumPtr d = build_root_datum(o.group);
    KLContext ctx(d, o.cap);
    CacheSession cache(o, d->descriptor());
    cache.seed(ctx, d);
    const WeylElement u = element_from_word(d, parse_word(o.u_word));
    const WeylElement w = element_from_word(d, parse_word(o.w_word));
    const PolyZ p = ctx.kl(u, w);
    if (o.check) {
        const PolyZ oracle = ctx.kl_via_r(u, w);
        if (oracle != p)
            throw CheckFailure("KL mismatch: recursion " + p.str() + " vs R-route " +
                               oracle.str());
    }
    cache.absorb_and_save(ctx);
    if (o.format == "text") {
        std::cout << p.str() << "\n";
    } else if (o.format == "csv") {
        std::cout << "u,w,P\n\"" << o.u_word << "\",\"" << o.w_word << "\"," << p.str() << "\n";
    } else {
        emit(poly_to_json(p));
    }
    return 0;
}

ParabolicSubset parse_para(const std::string& s) {
    std::vector<int> idx;
    for (int i : parse_word(s)) idx.push_back(i);
    return ParabolicSubset(idx);
}

int cmd_fibers(const Options& o) {
    RootDatumPtr d = build_root_datum(o.group);
    const DemazureMapSpec spec = make_demazure_spec(d, parse_word(o.word));
    if (length(spec.target) > o.cap)
        throw CapError("fibers: target length exceeds cap");

    std::vector<std::pair<WeylElement, PolyZ>> rows;
    if (o.para.empty()) {
        const FiberTable table = fiber_table(spec);
        for (const WeylElement& v : elements_below(spec.target, o.cap)) {
            auto it = table.find(v);
            rows.emplace_back(v, it == table.end() ? PolyZ::zero() : it->second);
        }
        if (o.check) {
            const EulerTable euler = fiber_euler_table(spec);
            for (const auto& [v, f] : rows) {
                auto it = euler.find(v);
                const Int cnt = it == euler.end() ? 0 : it->second;
                if (f(1) != cnt)
                    throw CheckFailure("Euler mismatch at v=" + element_word_string(v));
            }
        }
    } else {
        const ParabolicSubset P = parse_para(o.para);
        d->validate_parabolic(P);
        for (const WeylElement& w : coset_cells_below(P, spec.target, o.cap))
            rows.emplace_back(w, fiber_poincare_parahoric(spec, P, w));
        if (o.check) {
            const EulerTable euler = fiber_euler_table(spec);
            for (const auto& [w, f] : rows) {
                Int cnt = 0;
                for (const WeylElement& wp : parabolic_subgroup(d, P)) {
                    auto it = euler.find(multiply(w, wp));
                    if (it != euler.end()) cnt += it->second;
                }
                if (f(1) != cnt)
                    throw CheckFailure("parahoric Euler mismatch at w=" +
                                       element_word_string(w));
            }
        }
    }

    if (o.format == "csv") {
        std::cout << "v,length,F\n";
        for (const auto& [v, f] : rows)
            std::cout << "\"" << element_word_string(v) << "\"," << length(v) << "," << f.str()
                      << "\n";
    } else if (o.format == "text") {
        for (const auto& [v, f] : rows)
            std::cout << "v=" << element_word_string(v) << "  F=" << f.str() << "\n";
    } else {
        ordered_json j;
        j["word"] = spec.word;
        j["target"] = element_word_string(spec.target);
        if (!o.para.empty()) j["parahoric"] = parse_para(o.para).indices;
        ordered_json f = ordered_json::object();
        for (const auto& [v, poly] : rows) f[element_word_string(v)] = poly_to_json(poly);
        j["F"] = std::move(f);
        emit(j);
    }
    return 0;
}

void run_decompose_checks(const DemazureMapSpec& spec, const DecompositionReport& rep,
                          KLContext& ctx) {
    // subword Euler oracle
    const EulerTable euler = fiber_euler_table(spec);
    for (const auto& row : rep.rows) {
        auto it = euler.find(row.v);
        const Int cnt = it == euler.end() ? 0 : it->second;
        if (row.F(1) != cnt)
            throw CheckFailure("Euler mismatch at v=" + element_word_string(row.v));
    }
    // R-polynomial route for every KL pair in the interval
    for (const auto& a : rep.rows)
        for (const auto& b : rep.rows) {
            if (!ctx.leq(a.v, b.v)) continue;
            if (ctx.kl(a.v, b.v) != ctx.kl_via_r(a.v, b.v))
                throw CheckFailure("KL mismatch on interval pair");
        }
    // inverse-KL route to the multiplicities
    for (const auto& row : rep.rows) {
        PolyZ m;
        for (const auto& other : rep.rows) {
            if (!ctx.leq(row.v, other.v)) continue;
            m += ctx.inverse_kl(row.v, other.v, spec.target) * other.F;
        }
        if (m != row.M)
            throw CheckFailure("inverse-KL route mismatch at v=" + element_word_string(row.v));
    }
    if (!rep.checks.all()) throw CheckFailure("decomposition constraint checks failed");
}

int cmd_decompose(const Options& o, bool supports_only) {
    RootDatumPtr d = build_root_datum(o.group);
    KLContext ctx(d, o.cap);
    CacheSession cache(o, d->descriptor());
    cache.seed(ctx, d);
    const DemazureMapSpec spec = make_demazure_spec(d, parse_word(o.word));
    const DecompositionReport rep = multiplicities(spec, ctx);
    if (o.check) run_decompose_checks(spec, rep, ctx);
    cache.absorb_and_save(ctx);

    if (supports_only) {
        if (o.format == "text" || o.format == "csv") {
            for (const auto& v : rep.supports) std::cout << element_word_string(v) << "\n";
        } else {
            ordered_json j;
            j["word"] = spec.word;
            j["target"] = element_word_string(spec.target);
            ordered_json sup = ordered_json::array();
            for (const auto& v : rep.supports) sup.push_back(element_word_string(v));
            j["supports"] = std::move(sup);
            emit(j);
        }
        return 0;
    }
    if (o.format == "csv") {
        std::cout << report_to_csv(rep);
    } else if (o.format == "text") {
        std::cout << report_to_text(rep);
    } else {
        emit(report_to_json(rep));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Weyl-group, Kazhdan-Lusztig and Demazure-fiber combinatorics"};
    app.require_subcommand(1);

    Options o;
    CLI::App* info = app.add_subcommand("info", "root datum summary");
    add_common(info, o, false);
    CLI::App* dem = app.add_subcommand("demazure", "Demazure product of a word");
    add_common(dem, o, false);
    dem->add_option("--word", o.word, "comma-separated generator indices")->required();
    CLI::App* kl = app.add_subcommand("kl", "Kazhdan-Lusztig polynomial P(u,w)");
    add_common(kl, o);
    kl->add_option("--u", o.u_word, "word for u (empty = identity)");
    kl->add_option("--w", o.w_word, "word for w")->required();
    CLI::App* fib = app.add_subcommand("fibers", "fiber Poincare polynomials of a Demazure map");
    add_common(fib, o);
    fib->add_option("--word", o.word, "comma-separated generator indices")->required();
    fib->add_option("--para", o.para, "parahoric generator subset, e.g. 1,2");
    CLI::App* dec = app.add_subcommand("decompose", "decomposition-theorem multiplicities");
    add_common(dec, o);
    dec->add_option("--word", o.word, "comma-separated generator indices")->required();
    CLI::App* sup = app.add_subcommand("supports", "supports of a Demazure map");
    add_common(sup, o);
    sup->add_option("--word", o.word, "comma-separated generator indices")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(info)) return cmd_info(o);
        if (app.got_subcommand(dem)) return cmd_demazure(o);
        if (app.got_subcommand(kl)) return cmd_kl(o);
        if (app.got_subcommand(fib)) return cmd_fibers(o);
        if (app.got_subcommand(dec)) return cmd_decompose(o, false);
        if (app.got_subcommand(sup)) return cmd_decompose(o, true);
    } catch (const wflag::CapError& e) {
        std::cerr << "wflag: " << e.what() << "\n";
        return 3;
    } catch (const CheckFailure& e) {
        std::cerr << "wflag: check failed: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "wflag: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "wflag: internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
