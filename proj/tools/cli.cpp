#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "fracshadow/fracshadow.hpp"

namespace fracshadow::cli {
namespace {

/// Bad invocation: exit status 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FlagSpec {
    const char* name;
    const char* type;
    const char* help;
};

const std::vector<FlagSpec> all_flags = {
    {"op", "NAME", "Operator: rl-left rl-right riesz feller volterra | rl caputo gl observer"},
    {"alpha", "NUM", "Order alpha"},
    {"f", "EXPR", "Integrand or speed history f(t)"},
    {"kernel", "EXPR", "Volterra kernel K(t), or the clock g(t) for distance"},
    {"t", "NUM", "Anchor time t"},
    {"b", "NUM", "Right end b (rl-right, riesz, feller)"},
    {"a", "NUM", "Left end a (feller, default 0)"},
    {"c", "NUM", "Left coefficient c (feller)"},
    {"d", "NUM", "Right coefficient d (feller)"},
    {"nodes", "N", "Cells per grid"},
    {"grading", "R", "Mesh grading exponent, >= 1"},
    {"dt", "NUM", "Snapshot spacing"},
    {"t-max", "NUM", "Last snapshot time"},
    {"format", "FMT", "Output format"},
    {"out", "PATH", "Write output to PATH instead of stdout"},
};

class Flags {
public:
    explicit Flags(CLI::App& app) {
        for (const FlagSpec& spec : all_flags) {
            options_[spec.name] = app.add_option(std::string("--") + spec.name, values_[spec.name], spec.help)
                                      ->type_name(spec.type);
        }
        options_["format"]->check(CLI::IsMember({"csv", "json"}));
    }

    bool has(const std::string& name) const { return options_.at(name)->count() > 0; }

    const std::string& text(const std::string& name) const {
        if (!has(name)) throw UsageError("missing required flag --" + name);
        return values_.at(name);
    }

    double real(const std::string& name) const {
        const std::string& s = text(name);
        double v = 0.0;
        const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v)) {
            throw UsageError("--" + name + ": expected a finite number, got '" + s + "'");
        }
        return v;
    }

    double real_or(const std::string& name, double fallback) const { return has(name) ? real(name) : fallback; }

    std::size_t count(const std::string& name, std::size_t fallback) const {
        if (!has(name)) return fallback;
        const std::string& s = values_.at(name);
        std::size_t v = 0;
        const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || end != s.data() + s.size()) {
            throw UsageError("--" + name + ": expected a non-negative integer, got '" + s + "'");
        }
        return v;
    }

    Expr expression(const std::string& name) const {
        try {
            return parse(text(name));
        } catch (const ParseError& e) {
            throw UsageError("--" + name + ": " + e.what());
        }
    }

    Order order() const {
        try {
            return Order(real("alpha"));
        } catch (const Error& e) {
            throw UsageError(std::string("--alpha: ") + e.what());
        }
    }

    QuadOptions quad(std::size_t default_nodes = 1024) const {
        QuadOptions o;
        o.nodes = count("nodes", default_nodes);
        if (o.nodes < 2) throw UsageError("--nodes: need at least 2, got " + std::to_string(o.nodes));
        if (has("grading")) {
            const double r = real("grading");
            if (!(r >= 1.0)) throw UsageError("--grading: need r >= 1, got " + format_real(r));
            o.grading = r;
        }
        return o;
    }

    /// Rejects every given flag outside `allowed`.
    void allow_only(std::initializer_list<std::string_view> allowed, const std::string& context) const {
        for (const FlagSpec& spec : all_flags) {
            if (has(spec.name) && std::find(allowed.begin(), allowed.end(), spec.name) == allowed.end()) {
                throw UsageError(std::string("--") + spec.name + " is not used by " + context);
            }
        }
    }

    /// "alpha=0.5, t=1" for the numeric flags that were given.
    std::string describe() const {
        std::string s;
        for (const char* name : {"alpha", "t", "a", "b", "c", "d", "dt", "t-max", "nodes", "grading"}) {
            if (!has(name)) continue;
            if (!s.empty()) s += ", ";
            s += std::string(name) + "=" + values_.at(name);
        }
        return s;
    }

private:
    std::map<std::string, std::string> values_;
    std::map<std::string, CLI::Option*> options_;
};

std::string json_number(std::optional<double> x) { return x ? format_real(*x) : "null"; }

std::string json_record(const std::string& op, std::optional<double> alpha, double t, const QuadResult& r) {
    return "{\"op\":\"" + op + "\",\"alpha\":" + json_number(alpha) + ",\"t\":" + format_real(t) +
           ",\"value\":" + format_real(r.value) + ",\"error_estimate\":" + format_real(r.error_estimate) +
           ",\"nodes_used\":" + std::to_string(r.nodes_used) + "}\n";
}

void require_format(const Flags& flags, const std::string& wanted, const std::string& verb) {
    if (flags.has("format") && flags.text("format") != wanted) {
        throw UsageError("--format: " + verb + " writes " + wanted + " only");
    }
}

/// A validated command, ready to run. `compute` may throw fracshadow errors.
struct Plan {
    std::string label;
    std::function<std::string()> compute;
};

Plan plan_integrate(const Flags& flags) {
    const std::string op = flags.text("op");
    const std::string context = "integrate --op " + op;
    require_format(flags, "json", "integrate");
    const Expr f = flags.expression("f");
    const double t = flags.real("t");

    if (op == "volterra") {
        flags.allow_only({"op", "f", "kernel", "t", "nodes", "grading", "format", "out"}, context);
        const Expr kernel = flags.expression("kernel");
        const QuadOptions opts = flags.quad();
        return {context, [=] { return json_record(op, std::nullopt, t, volterra_convolution(f, kernel, t, opts)); }};
    }
    const Order alpha = flags.order();
    const QuadOptions opts = flags.quad();
    if (op == "rl-left") {
        flags.allow_only({"op", "alpha", "f", "t", "nodes", "grading", "format", "out"}, context);
        return {context, [=] { return json_record(op, alpha.value(), t, rl_integral_left(f, alpha, t, opts)); }};
    }
    if (op == "rl-right" || op == "riesz") {
        flags.allow_only({"op", "alpha", "f", "t", "b", "nodes", "grading", "format", "out"}, context);
        const double b = flags.real("b");
        return {context, [=] {
                    const QuadResult r = op == "riesz" ? riesz_potential(f, alpha, t, b, opts)
                                                       : rl_integral_right(f, alpha, t, b, opts);
                    return json_record(op, alpha.value(), t, r);
                }};
    }
    if (op == "feller") {
        flags.allow_only({"op", "alpha", "f", "t", "a", "b", "c", "d", "nodes", "grading", "format", "out"}, context);
        const double a = flags.real_or("a", 0.0);
        const double b = flags.real("b");
        const double c = flags.real("c");
        const double d = flags.real("d");
        return {context,
                [=] { return json_record(op, alpha.value(), t, feller_potential(f, alpha, c, d, t, a, b, opts)); }};
    }
    throw UsageError("--op: integrate expects rl-left, rl-right, riesz, feller or volterra, got '" + op + "'");
}

Plan plan_differentiate(const Flags& flags) {
    const std::string op = flags.text("op");
    const std::string context = "differentiate --op " + op;
    require_format(flags, "json", "differentiate");
    if (op != "rl" && op != "caputo" && op != "gl" && op != "observer") {
        throw UsageError("--op: differentiate expects rl, caputo, gl or observer, got '" + op + "'");
    }
    if (op == "gl") flags.allow_only({"op", "alpha", "f", "t", "nodes", "format", "out"}, context);
    else flags.allow_only({"op", "alpha", "f", "t", "nodes", "grading", "format", "out"}, context);

    const Expr f = flags.expression("f");
    const Order alpha = flags.order();
    if (op == "observer" ? alpha.value() > 1.0 : !(alpha.value() < 1.0)) {
        throw UsageError("--alpha: " + context + " needs alpha in (0, 1" + (op == "observer" ? "]" : ")") + ", got " +
                         format_real(alpha.value()));
    }
    const double t = flags.real("t");
    const QuadOptions opts = flags.quad(op == "gl" ? 32768 : 1024);
    return {context, [=] {
                QuadResult r;
                if (op == "rl") r = rl_derivative(f, alpha, t, opts);
                else if (op == "caputo") r = caputo_derivative(f, alpha, t, opts);
                else if (op == "gl") r = gl_derivative(f, alpha, t, opts.nodes);
                else r = observer_velocity(f, alpha, t, opts);
                return json_record(op, alpha.value(), t, r);
            }};
}

std::string fence_csv(const Fence& fence, const std::string& prefix) {
    std::string s;
    for (const FencePoint& p : fence.points) {
        s += prefix + format_real(p.tau) + "," + format_real(p.g) + "," + format_real(p.f) + "\n";
    }
    return s;
}

Plan plan_fence(const Flags& flags) {
    const std::string op = flags.has("op") ? flags.text("op") : "rl-left";
    const std::string context = "fence --op " + op;
    require_format(flags, "csv", "fence");
    const Expr f = flags.expression("f");
    const double t = flags.real("t");
    const std::size_t n = flags.count("nodes", 1024);
    if (n < 2) throw UsageError("--nodes: need at least 2, got " + std::to_string(n));

    std::optional<ScaleFamily> family;
    if (op == "volterra") {
        flags.allow_only({"op", "f", "kernel", "t", "nodes", "grading", "format", "out"}, context);
        family = Volterra{flags.expression("kernel")};
    } else if (op == "rl-left") {
        flags.allow_only({"op", "alpha", "f", "t", "nodes", "grading", "format", "out"}, context);
        family = LeftRL{flags.order()};
    } else if (op == "rl-right" || op == "riesz") {
        flags.allow_only({"op", "alpha", "f", "t", "b", "nodes", "grading", "format", "out"}, context);
        if (op == "riesz") family = Riesz{flags.order(), flags.real("b")};
        else family = RightRL{flags.order(), flags.real("b")};
    } else if (op == "feller") {
        flags.allow_only({"op", "alpha", "f", "t", "a", "b", "c", "d", "nodes", "grading", "format", "out"}, context);
        family = Feller{flags.order(), flags.real("c"), flags.real("d"), flags.real_or("a", 0.0), flags.real("b")};
    } else {
        throw UsageError("--op: fence expects rl-left, rl-right, riesz, feller or volterra, got '" + op + "'");
    }
    const std::optional<double> grading = flags.quad().grading;
    return {context, [=] { return "tau,g,f\n" + fence_csv(build_fence(f, TimeScale{*family, t}, n, grading), ""); }};
}

Plan plan_snapshots(const Flags& flags) {
    const std::string context = "snapshots";
    flags.allow_only({"alpha", "f", "t-max", "dt", "nodes", "format", "out"}, context);
    require_format(flags, "csv", "snapshots");
    const Expr f = flags.expression("f");
    const Order alpha = flags.order();
    const double t_max = flags.real("t-max");
    const double dt = flags.real("dt");
    const std::size_t n = flags.count("nodes", 1024);
    if (n < 2) throw UsageError("--nodes: need at least 2, got " + std::to_string(n));
    return {context, [=] {
                const SnapshotSeries series = snapshot_series(f, alpha, t_max, dt, n);
                std::string s = "t,tau,g,f\n";
                for (const Snapshot& snap : series.snapshots) s += fence_csv(snap.fence, format_real(snap.t) + ",");
                return s;
            }};
}

Plan plan_distance(const Flags& flags, std::ostream& err) {
    require_format(flags, "json", "distance");
    if (flags.has("alpha") && flags.has("kernel")) throw UsageError("--kernel: distance takes --alpha or --kernel, not both");
    const Expr v = flags.expression("f");
    const double t = flags.real("t");
    const QuadOptions opts = flags.quad();

    if (flags.has("alpha")) {
        flags.allow_only({"alpha", "f", "t", "nodes", "grading", "format", "out"}, "distance --alpha");
        const Order alpha = flags.order();
        return {"distance --alpha",
                [=] { return json_record("distance-fractional", alpha.value(), t, distance_fractional(v, alpha, t, opts)); }};
    }
    if (flags.has("kernel")) {
        flags.allow_only({"kernel", "f", "t", "nodes", "grading", "format", "out"}, "distance --kernel");
        const Expr g = flags.expression("kernel");
        return {"distance --kernel", [=, &err] {
                    const ObserverDistance d = distance_observer_continuous(v, g, t, opts);
                    if (!d.monotone) err << "warning: deformation --kernel is not increasing on [0, t]\n";
                    return json_record("distance-observer", std::nullopt, t, d.result);
                }};
    }
    flags.allow_only({"f", "t", "nodes", "format", "out"}, "distance");
    return {"distance", [=] {
                if (!(t > 0.0)) throw DomainError("t must be positive, got " + format_real(t));
                return json_record("distance-individual", std::nullopt, t,
                                   classical_integrate(v, Interval(0.0, t), opts.nodes));
            }};
}

std::string table1() {
    const SpeedRecord record = table1_record();
    const ClockModel clock = ClockModel::doubling(record.speeds.size());
    std::string s = "individual_second,speed,cosmic_second\n";
    for (std::size_t i = 0; i < record.speeds.size(); ++i) {
        s += std::to_string(i) + "," + format_real(record.speeds[i]) + "," + format_real(clock.ticks()[i]) + "\n";
    }
    s += "S_N = " + format_real(distance_individual(record)) + "\n";
    s += "S_O = " + format_real(distance_observer_discrete(record, clock)) + "\n";
    return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app("Fractional integrals and derivatives as Stieltjes integrals over deformed time", "fracshadow");
    app.require_subcommand(1);

    const std::map<std::string, std::string> verbs = {
        {"integrate", "Fractional integral of f (JSON)"},
        {"differentiate", "Fractional derivative of f (JSON)"},
        {"fence", "Fence geometry tau,g,f (CSV)"},
        {"snapshots", "Fences at t = dt, 2 dt, ... (CSV)"},
        {"distance", "Distance from a speed history (JSON)"},
    };
    std::map<std::string, CLI::App*> subs;
    std::map<std::string, std::unique_ptr<Flags>> flags;
    for (const auto& [verb, help] : verbs) {
        subs[verb] = app.add_subcommand(verb, help);
        flags[verb] = std::make_unique<Flags>(*subs[verb]);
    }
    CLI::App* demo = app.add_subcommand("demo", "Built-in demonstrations");
    std::string demo_name;
    demo->add_option("name", demo_name, "Demonstration to run")->required()->check(CLI::IsMember({"table1"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    Plan plan;
    std::string out_path;
    try {
        if (demo->parsed()) {
            plan = {"demo table1", table1};
        } else {
            for (const auto& [verb, sub] : subs) {
                if (!sub->parsed()) continue;
                const Flags& f = *flags[verb];
                if (f.has("out")) out_path = f.text("out");
                if (verb == "integrate") plan = plan_integrate(f);
                else if (verb == "differentiate") plan = plan_differentiate(f);
                else if (verb == "fence") plan = plan_fence(f);
                else if (verb == "snapshots") plan = plan_snapshots(f);
                else plan = plan_distance(f, err);
            }
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    std::string text;
    try {
        text = plan.compute();
    } catch (const std::exception& e) {
        const Flags* f = nullptr;
        for (const auto& [verb, sub] : subs) {
            if (sub->parsed()) f = flags[verb].get();
        }
        err << "error: " << plan.label;
        if (f && !f->describe().empty()) err << " (" << f->describe() << ")";
        err << ": " << e.what() << "\n";
        return 2;
    }

    if (out_path.empty()) {
        out << text;
        return 0;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!(file << text)) {
        err << "error: --out: cannot write '" << out_path << "'\n";
        return 1;
    }
    return 0;
}

}  // namespace fracshadow::cli
