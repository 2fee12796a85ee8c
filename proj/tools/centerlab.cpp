#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>

#include "centerlab/centerlab.hpp"

using namespace centerlab;

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Options {
    std::string file;
    std::vector<std::string> sets;
    std::string format = "json";
    bool no_timings = false;
    std::string perturb = "auto";
    unsigned max_degree = 10;
    std::string mode = "all-orders";
    bool singularities = false;
    std::string integral;
    int bound = 6;
    std::string sweep;
    std::vector<double> x0;
    std::string transversal = "x";
    double rtol = 1e-12;
};

class Timer {
public:
    Timer(json& out, const char* key, bool on) : out_(out), key_(key), on_(on), t0_(std::chrono::steady_clock::now()) {}
    ~Timer()
    {
        if (on_)
            out_[key_] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_).count();
    }

private:
    json& out_;
    const char* key_;
    bool on_;
    std::chrono::steady_clock::time_point t0_;
};

std::string read_input(const std::string& file)
{
    if (file == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(file);
    if (!in) throw UsageError("cannot open " + file);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::pair<std::string, std::string> split_assignment(const std::string& s)
{
    auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("expected name=value, got '" + s + "'");
    return {s.substr(0, eq), s.substr(eq + 1)};
}

PlaneSystem apply_sets(const PlaneSystem& s, const std::vector<std::string>& sets)
{
    if (sets.empty()) return s;
    std::map<std::string, Binding> b;
    for (auto& a : sets) {
        auto [name, value] = split_assignment(a);
        MPoly v = parse_poly(s.table(), value);
        if (v.is_constant()) b[name] = v.constant_value();
        else b[name] = v;
    }
    return substitute(s, b);
}

Rational parse_number(const std::string& text)
{
    auto t = VarTable::make();
    MPoly v = parse_poly(t, text);
    if (!v.is_constant()) throw UsageError("expected a number, got '" + text + "'");
    return v.constant_value();
}

struct Sweep {
    std::string name;
    std::vector<Rational> values;
};

Sweep parse_sweep(const std::string& spec)
{
    auto [name, range] = split_assignment(spec);
    std::vector<std::string> parts;
    std::stringstream ss(range);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw UsageError("sweep must look like name=start:stop:step");
    Rational a = parse_number(parts[0]), b = parse_number(parts[1]), h = parse_number(parts[2]);
    if (h <= 0) throw UsageError("sweep step must be positive");
    Sweep sw{name, {}};
    for (Rational v = a; v <= b; v += h) {
        sw.values.push_back(v);
        if (sw.values.size() > 100000) throw UsageError("sweep has too many points");
    }
    return sw;
}

unsigned thread_cap()
{
    if (const char* e = std::getenv("CENTERLAB_THREADS")) {
        int n = std::atoi(e);
        if (n > 0) return unsigned(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Evaluate f over the sweep points in batches; results keep sweep order.
json run_sweep(const PlaneSystem& s, const Sweep& sw, const std::function<json(const PlaneSystem&)>& f)
{
    json out = json::array();
    unsigned cap = thread_cap();
    for (std::size_t i = 0; i < sw.values.size(); i += cap) {
        std::vector<std::future<json>> batch;
        for (std::size_t k = i; k < std::min(sw.values.size(), i + cap); ++k) {
            PlaneSystem sk = substitute(s, std::map<std::string, Binding>{{sw.name, sw.values[k]}});
            batch.push_back(std::async(std::launch::async, [&f, sk]() {
                try {
                    return f(sk);
                } catch (const std::exception& e) {
                    return json{{"error", e.what()}};
                }
            }));
        }
        for (std::size_t k = 0; k < batch.size(); ++k) {
            json r = batch[k].get();
            r["value"] = sw.values[i + k].get_str();
            out.push_back(r);
        }
    }
    return out;
}

json directions_json(const CharacteristicDirections& cd)
{
    json j;
    j["all"] = cd.all;
    j["form"] = cd.form.table() ? cd.form.to_string() : "";
    j["degree"] = cd.degree;
    j["directions"] = json::array();
    for (auto& d : cd.directions) j["directions"].push_back(d.describe());
    if (!cd.note.empty()) j["note"] = cd.note;
    return j;
}

json return_map_json(const ReturnMapResult& r)
{
    json j;
    j["transversal"] = r.transversal.describe();
    j["classification"] = to_string(r.classification);
    j["rel_tol"] = r.rel_tol;
    j["threshold"] = r.threshold_factor;
    j["samples"] = json::array();
    for (auto& s : r.samples)
        j["samples"].push_back(
            {{"x0", s.x0}, {"image", s.image}, {"displacement", s.displacement}, {"return_time", s.time}});
    j["stats"] = {{"steps", r.stats.steps},
                  {"accepted", r.stats.accepted},
                  {"rejected", r.stats.rejected},
                  {"evaluations", r.stats.nfev}};
    return j;
}

json qh_json(const PlaneSystem& s, int bound, std::vector<std::string>* warnings)
{
    json j;
    auto sigs = detect_quasi_homogeneity(s, bound);
    j["signatures"] = json::array();
    for (auto& g : sigs) j["signatures"].push_back({{"p", g.p}, {"q", g.q}, {"m", g.m}});
    if (sigs.empty()) {
        j["verdict"] = "undecided";
        if (warnings) warnings->push_back("system is not quasi-homogeneous for p, q <= " + std::to_string(bound));
        return j;
    }
    j["analyses"] = json::array();
    std::string verdict = "undecided";
    for (auto& g : sigs) {
        auto c = classify_qh_center(s, g);
        json a{{"p", g.p}, {"q", g.q}, {"m", g.m}, {"verdict", to_string(c.verdict)}};
        a["condition_i"] = {{"status", to_string(c.condition_i.status)},
                            {"form", c.condition_i.W.to_string()},
                            {"exact", c.condition_i.exact},
                            {"detail", c.condition_i.detail}};
        if (c.condition_i.status != ConditionIStatus::holds)
            a["condition_i"]["window"] = {c.condition_i.window[0], c.condition_i.window[1]};
        if (c.condition_ii)
            a["condition_ii"] = {{"integral", c.condition_ii->value},
                                 {"error_estimate", c.condition_ii->error},
                                 {"period", c.condition_ii->period},
                                 {"zero", c.condition_ii->zero}};
        if (c.verdict != QHVerdict::undecided && verdict == "undecided") verdict = to_string(c.verdict);
        j["analyses"].push_back(a);
    }
    j["verdict"] = verdict;
    if (warnings && verdict != "undecided")
        warnings->push_back("quasi-homogeneous verdict is numeric: condition (ii) decided by quadrature tolerance");
    return j;
}

Transversal parse_transversal(const std::string& t)
{
    if (t == "x") return {};
    if (t == "y") return {TransversalKind::positive_y, 0};
    if (t.rfind("angle:", 0) == 0) return {TransversalKind::ray, std::stod(t.substr(6))};
    throw UsageError("transversal must be x, y or angle:<radians>");
}

AnalysisReport base_report(const std::string& cmd, const Options& o, const PlaneSystem& s)
{
    AnalysisReport r;
    r.table = s.table();
    r.input["command"] = cmd;
    r.input["file"] = o.file;
    r.input["set"] = o.sets;
    r.input["system"] = print_system(s);
    r.linear_class = to_string(s.linear_class);
    for (auto& v : violated_assumptions(s)) r.warnings.push_back("assumption violated: " + v);
    return r;
}

PlaneSystem perturbed_system(const PlaneSystem& s, const Options& o, AnalysisReport& r, std::set<std::size_t>& pert)
{
    std::string p = o.perturb;
    if (p == "auto") {
        bool has_eps = s.P.depends_on(VarTable::EPS) || s.Q.depends_on(VarTable::EPS);
        p = !has_eps && (s.linear_class == LinearClass::nilpotent || s.linear_class == LinearClass::degenerate)
                ? "minimal"
                : "none";
    }
    if (p == "none") {
        r.perturbation = {{"kind", "none"}};
        return s;
    }
    if (p.rfind("general:", 0) == 0) {
        unsigned d = unsigned(std::stoul(p.substr(8)));
        PerturbationKind kind =
            s.linear_class == LinearClass::nilpotent ? PerturbationKind::nilpotent : PerturbationKind::degenerate;
        auto tmpl = general_perturbation(s, kind, d);
        pert = tmpl.perturbation_vars;
        r.table = tmpl.system.table();
        r.perturbation = {{"kind", std::string(to_string(kind))},
                          {"template_degree", d},
                          {"parameters", tmpl.names},
                          {"system", print_system(tmpl.system)}};
        return tmpl.system;
    }
    PerturbationKind kind;
    if (p == "minimal")
        kind = s.linear_class == LinearClass::nilpotent ? PerturbationKind::nilpotent : PerturbationKind::degenerate;
    else if (p == "nilpotent") kind = PerturbationKind::nilpotent;
    else if (p == "degenerate") kind = PerturbationKind::degenerate;
    else if (p == "hamiltonian") kind = PerturbationKind::hamiltonian;
    else throw UsageError("unknown perturbation '" + p + "'");
    PlaneSystem out = build_perturbation(s, {kind, {}, {}});
    r.perturbation = {{"kind", std::string(to_string(kind))}, {"system", print_system(out)}};
    return out;
}

AnalysisReport cmd_liapunov(const Options& o, const PlaneSystem& s0)
{
    const bool tm = !o.no_timings;
    AnalysisReport r = base_report("liapunov", o, s0);
    std::set<std::size_t> pert;
    PlaneSystem s = perturbed_system(s0, o, r, pert);
    if (o.mode != "all-orders" && o.mode != "first-order") throw UsageError("mode must be all-orders or first-order");
    ConditionMode mode = o.mode == "all-orders" ? ConditionMode::all_orders : ConditionMode::first_order;
    LiapunovReport lr;
    {
        Timer t(r.timings, "liapunov_ms", tm);
        lr = compute_liapunov_constants(s, o.max_degree);
    }
    r.perturbation["convention"] = {{"h2", lr.convention.h2},
                                    {"corrective", lr.convention.corrective},
                                    {"kernel_rule", lr.convention.kernel_rule}};
    for (auto& c : lr.constants) r.liapunov.push_back({c.k, c.degree, c.ordinal, c.V});
    CenterConditions cc;
    {
        Timer t(r.timings, "conditions_ms", tm);
        cc = extract_center_conditions(lr, mode, pert, &s);
    }
    for (auto& c : cc.conditions)
        r.conditions.push_back({c.eps_order, c.poly, to_string(c.kind), c.action, c.degree});
    json st;
    st["status"] = to_string(cc.status);
    st["mode"] = to_string(mode);
    st["side_conditions"] = json::array();
    for (auto& sc : cc.side_conditions) st["side_conditions"].push_back(sc.to_string());
    st["substitution"] = json::object();
    for (auto& [v, val] : cc.substitution) st["substitution"][s.table()->name(v)] = val.to_string();
    r.structure["conditions"] = st;
    for (auto& w : lr.warnings) r.warnings.push_back(w);
    for (auto& w : cc.warnings) r.warnings.push_back(w);
    for (auto& sc : cc.side_conditions) r.warnings.push_back("side condition assumed nonzero: " + sc.to_string());
    if (o.singularities && s.linear_class != s0.linear_class) {
        Timer t(r.timings, "singularities_ms", tm);
        auto chk = check_no_vanishing_singularities(s, {Rational(1, 100), Rational(1, 10000)}, 1);
        json j{{"pass", chk.pass}, {"eps", chk.eps}, {"evidence", "numeric sampling"}};
        j["min_distance"] = json::array();
        for (double d : chk.min_distance) j["min_distance"].push_back(std::isfinite(d) ? json(d) : json(nullptr));
        if (chk.witness) j["witness"] = *chk.witness;
        r.numeric["vanishing_singularities"] = j;
        if (!chk.pass) r.warnings.push_back("perturbation creates singular points that collapse onto the origin");
    }
    return r;
}

AnalysisReport cmd_verify(const Options& o, const PlaneSystem& s)
{
    AnalysisReport r = base_report("verify", o, s);
    if (o.integral.empty()) throw UsageError("verify needs --integral");
    r.input["integral"] = o.integral;
    Timer t(r.timings, "verify_ms", !o.no_timings);
    DarbouxExpr H = parse_darboux(s.table(), o.integral);
    auto res = verify_darboux_integral(s, H);
    r.structure["hamiltonian"] = is_hamiltonian(s);
    r.structure["first_integral"] = {{"zero_residual", res.zero},
                                     {"residual", res.residual.to_string()},
                                     {"residual_terms", poly_to_json(res.residual)}};
    if (!res.domain_note.empty()) {
        r.structure["first_integral"]["domain"] = res.domain_note;
        r.warnings.push_back("first integral " + res.domain_note);
    }
    return r;
}

AnalysisReport cmd_reversible(const Options& o, const PlaneSystem& s)
{
    AnalysisReport r = base_report("reversible", o, s);
    Timer t(r.timings, "reversible_ms", !o.no_timings);
    auto rv = reversibility_conditions(s);
    json j;
    j["verdict"] = to_string(rv.verdict);
    j["angle_symbols"] = {rv.table->name(rv.c_index), rv.table->name(rv.s_index)};
    j["axis_conditions"] = json::array();
    for (auto& f : rv.axis_conditions) j["axis_conditions"].push_back(f.to_string());
    j["witnesses"] = json::array();
    for (auto& w : rv.witnesses)
        j["witnesses"].push_back({{"c", w.c}, {"s", w.s}, {"angle", w.angle()}, {"exact", w.exact}});
    r.structure["reversibility"] = j;
    return r;
}

AnalysisReport cmd_qhcenter(const Options& o, const PlaneSystem& s)
{
    AnalysisReport r = base_report("qhcenter", o, s);
    Timer t(r.timings, "qhcenter_ms", !o.no_timings);
    if (!o.sweep.empty()) {
        auto sw = parse_sweep(o.sweep);
        r.input["sweep"] = o.sweep;
        r.qhomog["sweep"] = run_sweep(s, sw, [&](const PlaneSystem& sk) { return qh_json(sk, o.bound, nullptr); });
        r.warnings.push_back("quasi-homogeneous verdicts are numeric: condition (ii) decided by quadrature tolerance");
        return r;
    }
    r.qhomog = qh_json(s, o.bound, &r.warnings);
    return r;
}

AnalysisReport cmd_returnmap(const Options& o, const PlaneSystem& s)
{
    AnalysisReport r = base_report("returnmap", o, s);
    Timer t(r.timings, "returnmap_ms", !o.no_timings);
    std::vector<double> x0 = o.x0.empty() ? std::vector<double>{0.02, 0.05, 0.1} : o.x0;
    Transversal tv = parse_transversal(o.transversal);
    ReturnMapOptions opt;
    opt.rel_tol = o.rtol;
    if (!o.sweep.empty()) {
        auto sw = parse_sweep(o.sweep);
        r.input["sweep"] = o.sweep;
        r.numeric["sweep"] =
            run_sweep(s, sw, [&](const PlaneSystem& sk) { return return_map_json(return_map(sk, x0, tv, opt)); });
    } else {
        r.numeric["return_map"] = return_map_json(return_map(s, x0, tv, opt));
    }
    r.warnings.push_back("return-map classification is numeric evidence only");
    return r;
}

AnalysisReport cmd_classify(const Options& o, const PlaneSystem& s)
{
    AnalysisReport r = base_report("classify", o, s);
    Timer t(r.timings, "classify_ms", !o.no_timings);
    std::vector<double> x0 = o.x0.empty() ? std::vector<double>{0.02, 0.05, 0.1} : o.x0;
    ReturnMapOptions opt;
    opt.rel_tol = o.rtol;
    auto m = classify_monodromic(s, x0, parse_transversal(o.transversal), opt);
    r.structure["hamiltonian"] = is_hamiltonian(s);
    r.structure["characteristic_directions"] = directions_json(m.directions);
    r.numeric["verdict"] = m.verdict;
    r.numeric["notes"] = m.notes;
    if (m.return_map) r.numeric["return_map"] = return_map_json(*m.return_map);
    try {
        r.qhomog = qh_json(s, o.bound, nullptr);
    } catch (const QHError& e) {
        r.qhomog = {{"error", e.what()}};
    }
    r.warnings.push_back("return-map classification is numeric evidence only");
    return r;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"centerlab: center-focus analysis of planar polynomial vector fields"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* c) {
        c->add_option("file", o.file, "system file ('-' for stdin)")->required();
        c->add_option("--set", o.sets, "specialize a parameter, name=value (repeatable)");
        c->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "text"}));
        c->add_flag("--no-timings", o.no_timings, "omit timings for byte-identical output");
    };
    auto* lia = app.add_subcommand("liapunov", "Liapunov constants and center conditions");
    common(lia);
    lia->add_option("--perturb", o.perturb, "auto|none|minimal|nilpotent|degenerate|hamiltonian|general:<d>");
    lia->add_option("--max-degree", o.max_degree, "largest even degree")->check(CLI::Range(4u, 64u));
    lia->add_option("--mode", o.mode, "all-orders|first-order");
    lia->add_flag("--check-singularities", o.singularities, "sample for singular points collapsing onto the origin");
    auto* ver = app.add_subcommand("verify", "check a Darboux-type first integral");
    common(ver);
    ver->add_option("--integral", o.integral, "first integral expression")->required();
    auto* rev = app.add_subcommand("reversible", "rotated reversibility conditions");
    common(rev);
    auto* qh = app.add_subcommand("qhcenter", "quasi-homogeneous center test");
    common(qh);
    qh->add_option("--bound", o.bound, "search bound for p and q")->check(CLI::Range(1, 50));
    qh->add_option("--sweep", o.sweep, "name=start:stop:step");
    auto* rm = app.add_subcommand("returnmap", "numeric Poincare return map");
    common(rm);
    rm->add_option("--x0", o.x0, "starting distances (repeatable)");
    rm->add_option("--transversal", o.transversal, "x|y|angle:<radians>");
    rm->add_option("--rtol", o.rtol, "integrator relative tolerance");
    rm->add_option("--sweep", o.sweep, "name=start:stop:step");
    auto* cl = app.add_subcommand("classify", "characteristic directions plus return-map evidence");
    common(cl);
    cl->add_option("--x0", o.x0, "starting distances (repeatable)");
    cl->add_option("--transversal", o.transversal, "x|y|angle:<radians>");
    cl->add_option("--rtol", o.rtol, "integrator relative tolerance");
    cl->add_option("--bound", o.bound, "search bound for p and q")->check(CLI::Range(1, 50));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        PlaneSystem s = apply_sets(parse_system(read_input(o.file)), o.sets);
        AnalysisReport r;
        if (lia->parsed()) r = cmd_liapunov(o, s);
        else if (ver->parsed()) r = cmd_verify(o, s);
        else if (rev->parsed()) r = cmd_reversible(o, s);
        else if (qh->parsed()) r = cmd_qhcenter(o, s);
        else if (rm->parsed()) r = cmd_returnmap(o, s);
        else r = cmd_classify(o, s);
        json j = to_json(r);
        if (o.format == "text") std::cout << render_text(j);
        else std::cout << j.dump(2) << "\n";
        return 0;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const SystemError& e) {
        std::cerr << "invalid system: " << e.what() << "\n";
        return 2;
    } catch (const ClassMismatch& e) {
        std::cerr << "class mismatch: " << e.what() << "\n";
        return 3;
    } catch (const QHError& e) {
        std::cerr << "precondition failed: " << e.what() << "\n";
        return 3;
    } catch (const EngineFault& e) {
        std::cerr << "engine fault: " << e.what() << "\n";
        return 4;
    } catch (const ReturnMapError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 4;
    } catch (const IntegrationError& e) {
        std::cerr << "numeric failure: " << e.what() << " (closest approach " << e.closest_approach << ")\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
