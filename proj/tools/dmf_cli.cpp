#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dmf/combinat.hpp"
#include "dmf/errors.hpp"
#include "dmf/gf.hpp"
#include "dmf/isogeny.hpp"
#include "dmf/poly.hpp"
#include "dmf/spectra.hpp"
#include "dmf/traces.hpp"

using json = nlohmann::ordered_json;
using namespace dmf;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;
constexpr int kExitSpectral = 4;

struct FieldArgs {
    std::string q_text;
    int p = 0;
    int r = 1;
    std::string modulus;
};

std::pair<int, int> split_prime_power(long long q) {
    if (q < 2) throw error("q must be at least 2");
    for (long long p = 2; p * p <= q; ++p) {
        if (q % p == 0) {
            int r = 0;
            long long t = q;
            while (t % p == 0) {
                t /= p;
                ++r;
            }
            if (t != 1) throw error("q is not a prime power");
            return {static_cast<int>(p), r};
        }
    }
    return {static_cast<int>(q), 1};  // q itself prime
}

long long parse_int(const std::string& s, const char* what) {
    try {
        size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw error("");
        return v;
    } catch (...) {
        throw error(std::string("cannot parse ") + what + ": '" + s + "'");
    }
}

const FieldDesc& resolve_field(const FieldArgs& fa) {
    int p = 0, r = 1;
    if (!fa.q_text.empty()) {
        if (fa.p != 0) throw error("give either --q or --p/--r, not both");
        auto [pp, rr] = split_prime_power(parse_int(fa.q_text, "--q"));
        p = pp;
        r = rr;
    } else if (fa.p != 0) {
        p = fa.p;
        r = fa.r;
    } else {
        throw error("a field is required: --q or --p (with optional --r)");
    }
    if (fa.modulus.empty()) return field_create(p, r);
    return field_create(p, r, fa.modulus);
}

std::vector<long long> parse_q_list(const std::string& text) {
    std::vector<long long> out;
    std::string cur;
    std::stringstream ss(text);
    while (std::getline(ss, cur, ','))
        if (!cur.empty()) out.push_back(parse_int(cur, "--q"));
    if (out.empty()) throw error("empty q list");
    return out;
}

struct Range {
    long long from = 0, to = 0, step = 1;
};

Range parse_range(const std::string& text) {
    Range r;
    std::vector<std::string> parts;
    std::string cur;
    std::stringstream ss(text);
    while (std::getline(ss, cur, ':')) parts.push_back(cur);
    if (parts.size() < 2 || parts.size() > 3)
        throw error("range must be from:to or from:to:step, got '" + text + "'");
    r.from = parse_int(parts[0], "range start");
    r.to = parse_int(parts[1], "range end");
    if (parts.size() == 3) r.step = parse_int(parts[2], "range step");
    if (r.step < 1) throw error("range step must be positive");
    return r;
}

std::vector<long long> range_values(const Range& r) {
    std::vector<long long> out;
    for (long long k = r.from; k <= r.to; k += r.step) out.push_back(k);
    return out;
}

void add_field_flags(CLI::App* cmd, FieldArgs& fa) {
    cmd->add_option("--q", fa.q_text, "field size q (prime power)");
    cmd->add_option("--p", fa.p, "field characteristic");
    cmd->add_option("--r", fa.r, "extension degree (q = p^r)");
    cmd->add_option("--modulus", fa.modulus, "defining modulus over F_p, e.g. x^2+1");
}

json coeffs_json(const PolyA& f) {
    json arr = json::array();
    if (f.is_zero()) return arr;
    for (long long i = f.deg_int(); i >= 0; --i) {
        int c = f.coeff(i);
        if (c != 0) arr.push_back(json::array({i, f.F->elem_str(c)}));
    }
    return arr;
}

json segments_json(const std::vector<NPSegment>& segs) {
    json arr = json::array();
    for (const NPSegment& s : segs) {
        json j;
        j["w_num"] = s.w_num;
        j["w_den"] = s.w_den;
        j["slope_num"] = s.slope_num;
        j["slope_den"] = s.slope_den;
        j["length"] = s.length;
        long long an = s.w_num < 0 ? -s.w_num : s.w_num;
        j["abs"] = s.w_den == 1 ? std::to_string(an)
                                : std::to_string(an) + "/" + std::to_string(s.w_den);
        arr.push_back(j);
    }
    return arr;
}

std::string format_half(long long twice) {
    if (twice % 2 == 0) return std::to_string(twice / 2);
    return std::to_string(twice / 2) + (twice < 0 ? "" : "") + ".5";
}

std::string format_log(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

template <class Fn>
void parallel_indexed(int jobs, size_t n, Fn fn) {
    jobs = std::max(1, jobs);
    if (jobs == 1 || n < 2) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w)
        workers.emplace_back([&, w]() {
            for (size_t i = static_cast<size_t>(w); i < n; i += static_cast<size_t>(jobs)) fn(i);
        });
    for (auto& t : workers) t.join();
}

// ---------------------------------------------------------------------------

struct TraceArgs {
    FieldArgs field;
    std::string prime_text = "T";
    int n = 1;
    long long k = 0;
    long long l = 1;
    std::string format = "text";
    int cap = 6;
    bool unscaled = false;
    int jobs = 1;
};

int cmd_trace(const TraceArgs& a) {
    const FieldDesc& F = resolve_field(a.field);
    PolyA prime = parse_poly(F, a.prime_text);
    TraceOptions topts{a.cap, a.jobs};
    TraceResult res = trace_auto({&F, prime, a.n, a.k, a.l}, topts);
    PolyA val = a.unscaled ? unscale_trace(res.value, prime, a.n) : res.value;
    if (a.format == "json") {
        json j;
        j["q"] = F.q;
        j["modulus"] = field_modulus_str(F);
        j["prime"] = prime.str();
        j["n"] = a.n;
        j["k"] = a.k;
        j["l"] = a.l;
        j["trace"] = val.str();
        j["coeffs"] = coeffs_json(val);
        j["method"] = res.method;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << val.str() << "\n";
        std::cout << "# method: " << res.method << "\n";
        if (F.r > 1) std::cout << "# modulus: " << field_modulus_str(F) << "\n";
    }
    return 0;
}

struct TableArgs {
    std::string q_list;
    std::string modulus;
    std::string prime_text = "T";
    int n = 1;
    std::string k_range;
    long long l = 1;
    std::string format = "csv";
    int cap = 6;
    bool unscaled = false;
    int jobs = 1;
};

int cmd_table(const TableArgs& a) {
    std::vector<long long> qs = parse_q_list(a.q_list);
    std::vector<const FieldDesc*> fields;
    std::vector<PolyA> primes;
    for (long long q : qs) {
        auto [p, r] = split_prime_power(q);
        const FieldDesc& F = a.modulus.empty() ? field_create(p, r) : field_create(p, r, a.modulus);
        fields.push_back(&F);
        primes.push_back(parse_poly(F, a.prime_text));
    }
    std::vector<long long> ks = range_values(parse_range(a.k_range));
    TraceOptions topts{a.cap, 1};

    std::vector<std::vector<std::string>> cells(ks.size(),
                                               std::vector<std::string>(qs.size()));
    parallel_indexed(a.jobs, ks.size() * qs.size(), [&](size_t idx) {
        size_t i = idx / qs.size(), c = idx % qs.size();
        const FieldDesc& F = *fields[c];
        PolyA val = trace_auto({&F, primes[c], a.n, ks[i], a.l}, topts).value;
        if (a.unscaled) val = unscale_trace(val, primes[c], a.n);
        cells[i][c] = val.str();
    });

    if (a.format == "text") {
        std::cout << "| k |";
        for (long long q : qs) std::cout << " q=" << q << " |";
        std::cout << "\n|---|";
        for (size_t c = 0; c < qs.size(); ++c) std::cout << "---|";
        std::cout << "\n";
        for (size_t i = 0; i < ks.size(); ++i) {
            std::cout << "| " << ks[i] << " |";
            for (size_t c = 0; c < qs.size(); ++c) std::cout << " " << cells[i][c] << " |";
            std::cout << "\n";
        }
    } else {
        std::cout << "k";
        for (long long q : qs) std::cout << ",q=" << q;
        std::cout << "\n";
        for (size_t i = 0; i < ks.size(); ++i) {
            std::cout << ks[i];
            for (size_t c = 0; c < qs.size(); ++c) std::cout << "," << cells[i][c];
            std::cout << "\n";
        }
    }
    return 0;
}

struct CensusArgs {
    FieldArgs field;
    std::string prime_text = "T";
    int n = 1;
    std::string a_text, b_text;  // iso mode
};

int cmd_census(const CensusArgs& a, bool single) {
    const FieldDesc& F = resolve_field(a.field);
    PolyA prime = parse_poly(F, a.prime_text);
    const Census& C = census(F, prime, a.n);
    if (!single) {
        std::cout << census_csv(C);
        return 0;
    }
    if (a.a_text.empty() || a.b_text.empty()) throw error("iso needs --a and --b");
    PolyA av = parse_poly(F, a.a_text);
    int bv = F.parse_elem(a.b_text);
    if (bv == 0) throw error("--b must be a nonzero field element");
    int count = 0;
    for (const IsoCount& row : C.rows)
        if (row.cls.a == av && row.cls.b == bv) count = row.count;
    std::cout << count << "\n";
    return 0;
}

struct SpectrumArgs {
    FieldArgs field;
    std::string prime_text = "T";
    long long k = 0;
    long long l = 1;
    std::string format = "json";
    int cap = 6;
    int jobs = 1;
};

json spectrum_json(const FieldDesc& F, const SpectrumReport& sp) {
    json j;
    j["q"] = F.q;
    j["modulus"] = field_modulus_str(F);
    j["prime"] = sp.prime.str();
    j["k"] = sp.k;
    j["l"] = sp.l;
    j["dim"] = sp.dim;
    j["method"] = sp.method;
    json tr = json::array();
    for (const PolyA& t : sp.traces) tr.push_back(t.str());
    j["traces"] = tr;
    j["charpoly"] = sp.charpoly ? json(sp.charpoly->str()) : json(nullptr);
    j["visible_minpoly"] = sp.visible_minpoly ? json(sp.visible_minpoly->str()) : json(nullptr);
    j["bm_length"] = sp.bm_length >= 0 ? json(sp.bm_length) : json(nullptr);
    j["hankel_det"] = sp.hankel_det.str();
    j["repeated"] = sp.repeated;
    j["repeated_evidence"] = sp.repeated_evidence;
    j["slopes_inf"] = segments_json(sp.slopes_inf);
    j["slopes_prime"] = segments_json(sp.slopes_prime);
    j["slopes_partial"] = sp.slopes_partial;
    json ome = json::array();
    for (const PolyA& e : sp.odd_mult_eigs) ome.push_back(e.str());
    j["odd_mult_eigs"] = ome;
    json roots = json::array();
    for (const auto& [rt, m] : sp.integral_roots) roots.push_back(json::array({rt.str(), m}));
    j["integral_roots"] = roots;
    j["oldnew"] = {{"half_power_exists", sp.oldnew.half_power_exists},
                   {"plus_root", sp.oldnew.plus_root},
                   {"minus_root", sp.oldnew.minus_root},
                   {"decomposition_holds", sp.oldnew.decomposition_holds}};
    return j;
}

int cmd_spectrum(const SpectrumArgs& a, bool slopes_only) {
    const FieldDesc& F = resolve_field(a.field);
    PolyA prime = parse_poly(F, a.prime_text);
    SpectrumOptions sopts{a.cap, a.jobs, !slopes_only};
    SpectrumReport sp = spectrum(F, prime, a.k, a.l, sopts);
    if (slopes_only) {
        json j;
        j["q"] = F.q;
        j["modulus"] = field_modulus_str(F);
        j["prime"] = prime.str();
        j["k"] = sp.k;
        j["l"] = sp.l;
        j["dim"] = sp.dim;
        j["method"] = sp.method;
        j["slopes_inf"] = segments_json(sp.slopes_inf);
        j["slopes_prime"] = segments_json(sp.slopes_prime);
        j["slopes_partial"] = sp.slopes_partial;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    if (a.format == "text") {
        std::cout << "dim " << sp.dim << ", method " << sp.method << "\n";
        if (sp.charpoly) std::cout << "charpoly: " << sp.charpoly->str() << "\n";
        if (sp.visible_minpoly && !sp.charpoly)
            std::cout << "visible minpoly: " << sp.visible_minpoly->str() << "\n";
        std::cout << "repeated: " << (sp.repeated ? "yes" : "no") << " (" << sp.repeated_evidence
                  << ")\n";
        for (const NPSegment& s : sp.slopes_inf)
            std::cout << "w-slope " << s.w_num << (s.w_den != 1 ? "/" + std::to_string(s.w_den) : "")
                      << " x" << s.length << "\n";
    } else {
        std::cout << spectrum_json(F, sp).dump(2) << "\n";
    }
    return 0;
}

struct ScanArgs {
    FieldArgs field;
    std::string mode = "attainment";
    std::string prime_text = "T";
    int n = 1;
    std::string k_range;
    long long l = 1;
    int cap = 6;
    int jobs = 1;
};

int cmd_scan(const ScanArgs& a) {
    const FieldDesc& F = resolve_field(a.field);
    PolyA prime = parse_poly(F, a.prime_text);
    json j;
    j["mode"] = a.mode;
    j["q"] = F.q;
    j["modulus"] = field_modulus_str(F);
    j["prime"] = prime.str();
    if (a.mode == "attainment") {
        Range r = parse_range(a.k_range);
        SpectrumOptions sopts{a.cap, a.jobs, false};
        AttainmentReport rep = scan_attainment(F, prime, a.l, r.from, r.to, sopts);
        j["l"] = a.l;
        j["predicted"] = rep.predicted;
        json rows = json::array();
        for (const AttainmentRow& row : rep.rows) {
            json rj;
            rj["k"] = row.k;
            rj["dim"] = row.dim;
            rj["skipped"] = row.skipped;
            if (!row.note.empty()) rj["note"] = row.note;
            rj["attained"] = row.attained;
            rj["mult"] = row.mult;
            rows.push_back(rj);
        }
        j["rows"] = rows;
    } else if (a.mode == "repetition") {
        if (F.p != 2) throw error("repetition scan needs even characteristic");
        Range r = parse_range(a.k_range);
        json rows = json::array();
        std::vector<long long> clear;
        for (long long k = std::max<long long>(r.from, 2); k <= r.to; k += r.step) {
            long long dim = dim_cusp(F.q, k, a.l);
            RepeatedEigResult re = repeated_eig_char2(F, prime, k, a.l);
            json rj;
            rj["k"] = k;
            rj["dim"] = dim;
            rj["repeated"] = re.repeated;
            rj["evidence"] = re.evidence;
            rows.push_back(rj);
            if (dim >= 1 && !re.repeated) clear.push_back(k);
        }
        j["l"] = a.l;
        j["rows"] = rows;
        j["no_repetition_weights"] = clear;
    } else if (a.mode == "strongram") {
        Range r = parse_range(a.k_range);
        TraceOptions topts{a.cap, a.jobs};
        std::vector<FigureRow> rows = figure_data(F, prime, a.n, a.l, r.from, r.to, topts);
        j["n"] = a.n;
        j["l"] = a.l;
        bool all_within = true;
        json out = json::array();
        for (const FigureRow& row : rows) {
            json rj;
            rj["k"] = row.k;
            rj["zero_trace"] = row.zero_trace;
            if (!row.zero_trace) {
                rj["deg"] = row.deg;
                rj["strong_bound"] = format_half(row.bound2);
                rj["within"] = 2 * row.deg <= row.bound2;
                if (2 * row.deg > row.bound2) all_within = false;
            }
            out.push_back(rj);
        }
        j["rows"] = out;
        j["all_within"] = all_within;
    } else if (a.mode == "suff") {
        TraceOptions topts{a.cap, a.jobs};
        RamSuffReport rep = ram_suff_check(F, prime, a.n, topts);
        j["n"] = a.n;
        j["tuples_checked"] = rep.tuples_checked;
        json v = json::array();
        for (const MomentViolation& mv : rep.violations) {
            json rj;
            rj["v"] = mv.v;
            rj["t"] = mv.t;
            rj["value"] = F.elem_str(mv.value);
            v.push_back(rj);
        }
        j["violations"] = v;
    } else {
        throw error("unknown scan mode '" + a.mode +
                    "' (expected attainment, repetition, strongram, suff)");
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

struct FigureArgs {
    FieldArgs field;
    std::string prime_text = "T";
    int n = 1;
    std::string k_range;
    long long l = 1;
    int cap = 6;
    int jobs = 1;
};

int cmd_figure(const FigureArgs& a) {
    const FieldDesc& F = resolve_field(a.field);
    PolyA prime = parse_poly(F, a.prime_text);
    Range r = parse_range(a.k_range);
    TraceOptions topts{a.cap, a.jobs};
    std::vector<FigureRow> rows = figure_data(F, prime, a.n, a.l, r.from, r.to, topts);
    std::cout << "k,deg_trace,strong_bound,log_distance\n";
    for (const FigureRow& row : rows) {
        std::cout << row.k << ",";
        if (row.zero_trace)
            std::cout << "-inf," << format_half(row.bound2) << ",";
        else
            std::cout << row.deg << "," << format_half(row.bound2) << ","
                      << format_log(row.log_distance);
        std::cout << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact traces and spectra of Hecke operators on Drinfeld cusp forms of level 1"};
    app.require_subcommand(1);

    TraceArgs ta;
    CLI::App* trace = app.add_subcommand("trace", "trace of T_prime^n on the (k, l) cusp forms");
    add_field_flags(trace, ta.field);
    trace->add_option("--prime", ta.prime_text, "monic irreducible prime of F_q[T]");
    trace->add_option("--n", ta.n, "power of the Hecke operator");
    trace->add_option("--k", ta.k, "weight")->required();
    trace->add_option("--l", ta.l, "type");
    trace->add_option("--format", ta.format, "text or json");
    trace->add_option("--cap", ta.cap, "census size cap on n*deg(prime)");
    trace->add_flag("--unscaled", ta.unscaled, "multiply by prime^n (integral Hecke operator)");
    trace->add_option("--jobs", ta.jobs, "worker threads");

    TableArgs tb;
    CLI::App* table = app.add_subcommand("table", "trace table over a weight range");
    table->add_option("--q", tb.q_list, "comma-separated q list")->required();
    table->add_option("--modulus", tb.modulus, "defining modulus (single-q only)");
    table->add_option("--prime", tb.prime_text, "prime (text, same for all q)");
    table->add_option("--n", tb.n, "power of the Hecke operator");
    table->add_option("--k-range", tb.k_range, "weights from:to[:step]")->required();
    table->add_option("--l", tb.l, "type");
    table->add_option("--format", tb.format, "csv or text (markdown)");
    table->add_option("--cap", tb.cap, "census size cap");
    table->add_flag("--unscaled", tb.unscaled, "multiply by prime^n");
    table->add_option("--jobs", tb.jobs, "worker threads");

    CensusArgs ca;
    CLI::App* census_cmd = app.add_subcommand("census", "isogeny class census CSV");
    add_field_flags(census_cmd, ca.field);
    census_cmd->add_option("--prime", ca.prime_text, "prime");
    census_cmd->add_option("--n", ca.n, "power");

    CensusArgs ia;
    CLI::App* iso = app.add_subcommand("iso", "single class count mod p");
    add_field_flags(iso, ia.field);
    iso->add_option("--prime", ia.prime_text, "prime");
    iso->add_option("--n", ia.n, "power");
    iso->add_option("--a", ia.a_text, "Frobenius trace a")->required();
    iso->add_option("--b", ia.b_text, "unit b")->required();

    SpectrumArgs sa;
    CLI::App* spec = app.add_subcommand("spectrum", "spectral report for T_prime on (k, l)");
    add_field_flags(spec, sa.field);
    spec->add_option("--prime", sa.prime_text, "prime");
    spec->add_option("--k", sa.k, "weight")->required();
    spec->add_option("--l", sa.l, "type");
    spec->add_option("--format", sa.format, "json or text");
    spec->add_option("--cap", sa.cap, "census size cap");
    spec->add_option("--jobs", sa.jobs, "worker threads");

    SpectrumArgs la;
    CLI::App* slopes = app.add_subcommand("slopes", "Newton-polygon slopes only");
    add_field_flags(slopes, la.field);
    slopes->add_option("--prime", la.prime_text, "prime");
    slopes->add_option("--k", la.k, "weight")->required();
    slopes->add_option("--l", la.l, "type");
    slopes->add_option("--cap", la.cap, "census size cap");
    slopes->add_option("--jobs", la.jobs, "worker threads");

    ScanArgs sc;
    CLI::App* scan = app.add_subcommand("scan", "bulk reports (attainment, repetition, strongram, suff)");
    add_field_flags(scan, sc.field);
    scan->add_option("--mode", sc.mode, "attainment | repetition | strongram | suff");
    scan->add_option("--prime", sc.prime_text, "prime");
    scan->add_option("--n", sc.n, "power (strongram, suff)");
    scan->add_option("--k-range", sc.k_range, "weights from:to[:step]");
    scan->add_option("--l", sc.l, "type");
    scan->add_option("--cap", sc.cap, "census size cap");
    scan->add_option("--jobs", sc.jobs, "worker threads");

    FigureArgs fa;
    CLI::App* fig = app.add_subcommand("figure", "CSV of trace degrees against the strong bound");
    add_field_flags(fig, fa.field);
    fig->add_option("--prime", fa.prime_text, "prime");
    fig->add_option("--n", fa.n, "power");
    fig->add_option("--k-range", fa.k_range, "weights from:to[:step]")->required();
    fig->add_option("--l", fa.l, "type");
    fig->add_option("--cap", fa.cap, "census size cap");
    fig->add_option("--jobs", fa.jobs, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (trace->parsed()) return cmd_trace(ta);
        if (table->parsed()) return cmd_table(tb);
        if (census_cmd->parsed()) return cmd_census(ca, false);
        if (iso->parsed()) return cmd_census(ia, true);
        if (spec->parsed()) return cmd_spectrum(sa, false);
        if (slopes->parsed()) return cmd_spectrum(la, true);
        if (scan->parsed()) return cmd_scan(sc);
        if (fig->parsed()) return cmd_figure(fa);
        std::cerr << "no command given\n";
        return kExitUsage;
    } catch (const CapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCap;
    } catch (const DimensionAtLeastP& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSpectral;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
