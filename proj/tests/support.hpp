#pragma once

// Shared fixtures: frozen reference values, deterministic generators.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fracshadow/fracshadow.hpp"

namespace fs_test {

using namespace fracshadow;

// Reference values computed at 50 significant digits (tests/oracles/compute_oracles.py).
namespace oracle {

inline constexpr double sqrt_pi = 1.7724538509055160273;
inline constexpr double gamma_1_5 = 0.88622692545275801365;
inline constexpr double gamma_1_75 = 0.91906252684888323385;
inline constexpr double gamma_2_5 = 1.3293403881791370205;
inline constexpr double gamma_2_75 = 1.6083594219855456592;

struct GammaCase {
    double x;
    double value;
};
inline constexpr std::array<GammaCase, 14> gamma_table = {{
    {0.5, 1.7724538509055160273},
    {1.5, 0.88622692545275801365},
    {1.75, 0.91906252684888323385},
    {2.5, 1.3293403881791370205},
    {2.75, 1.6083594219855456592},
    {0.001, 999.42377248459546611},
    {0.1, 9.5135076986687318363},
    {10.3, 716430.68906237524455},
    {100.7, 2.3417900214542998913e+157},
    {169.5, 3.281470451067846378e+303},
    {170.0, 4.2690680090047052749e+304},
    {1.25, 0.90640247705547707798},
    {0.75, 1.2254167024651776451},
    {0.25, 3.6256099082219083119},
}};

/// I^alpha t^beta at t = 1, i.e. Gamma(beta+1) / Gamma(alpha+beta+1).
struct PowerCase {
    double beta;
    double alpha;
    double value;
};
inline constexpr std::array<PowerCase, 9> power_rule = {{
    {0, 0.25, 1.1032626513208372574},
    {0, 0.5, 1.1283791670955125739},
    {0, 0.75, 1.0880652521310173081},
    {1, 0.25, 0.88261012105666980595},
    {1, 0.5, 0.75225277806367504926},
    {1, 0.75, 0.62175157264629560463},
    {2, 0.25, 0.78454232982815093862},
    {2, 0.5, 0.60180222245094003941},
    {2, 0.75, 0.45218296192457862155},
}};

inline constexpr double scale_left_075_1_05 = 0.44109778242029961154;
inline constexpr double scale_right_075_1_10_2 = 2.1761305042620346162;
inline constexpr double scale_riesz_075_3_3 = 2.480252420659933366;
inline constexpr double volterra_q_075 = 1.0880652839170350221;  // K = t^0.75/0.9190625, t = tau = 1

inline constexpr double classical_fig1 = 50.919535764538226226;  // int_0^10 t + 0.5 sin t

inline constexpr double riesz_1_05_1_4 = 3.0827892147071922602;
inline constexpr double feller_2_m1 = 0.30234828657934546145;
inline constexpr double riesz_t_left = 10.394758407776343403;  // f = t, alpha = 0.75, t = 5, b = 10
inline constexpr double riesz_t_right = 25.986896019440858507;
inline constexpr double riesz_t_total = 36.381654427217201909;

inline constexpr double d05_t_at_1 = 1.1283791670955125739;
inline constexpr double d05_1_at_4 = 0.28209479177387814347;
inline constexpr double d05_1_at_1 = 0.56418958354775628695;
inline constexpr double d0999_t2_at_1 = 1.9991539655244632847;

}  // namespace oracle

inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

/// The smooth test pool of the fence and derivative suites.
inline const std::vector<std::string>& smooth_pool() {
    static const std::vector<std::string> pool = {"1", "t", "t^2", "sin(t)", "t + 0.5*sin(t)"};
    return pool;
}

/// Ten smooth integrands for engine-agreement sweeps.
inline const std::vector<std::string>& integrand_pool() {
    static const std::vector<std::string> pool = {"1",          "t",          "t^2",        "sin(t)",
                                                  "cos(t)",     "exp(-t/4)",  "t + 0.5*sin(t)",
                                                  "1/(1 + t^2)", "sqrt(1 + t)", "t^3 - 2*t"};
    return pool;
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline int pick(std::mt19937_64& g, int n) { return std::uniform_int_distribution<int>(0, n - 1)(g); }

/// Random non-negative constant with a short or a full-precision mantissa.
inline double random_constant(std::mt19937_64& g) {
    switch (pick(g, 4)) {
        case 0: return static_cast<double>(pick(g, 10));
        case 1: return static_cast<double>(pick(g, 1000)) / 8.0;
        case 2: return uniform(g, 0.0, 10.0);
        default: return uniform(g, 1.0, 10.0) * std::pow(10.0, pick(g, 21) - 10);
    }
}

/// Random AST of depth <= depth using every node kind the parser can produce.
inline Expr random_ast(std::mt19937_64& g, int depth) {
    if (depth <= 1 || pick(g, 5) == 0) {
        return pick(g, 2) == 0 ? Expr::variable() : Expr::constant(random_constant(g));
    }
    static constexpr BinaryOp ops[] = {BinaryOp::add, BinaryOp::sub, BinaryOp::mul, BinaryOp::div, BinaryOp::pow};
    static constexpr Function fns[] = {Function::sin, Function::cos,  Function::exp, Function::ln,
                                       Function::sqrt, Function::abs, Function::sign};
    switch (pick(g, 4)) {
        case 0: return Expr::negate(random_ast(g, depth - 1));
        case 1: return Expr::call(fns[pick(g, 7)], random_ast(g, depth - 1));
        default: return Expr::binary(ops[pick(g, 5)], random_ast(g, depth - 1), random_ast(g, depth - 1));
    }
}

/// Random differentiable expression that stays bounded: denominators and
/// ln/sqrt arguments have the form c + u^2 with c >= 0.5, powers have small
/// constant exponents.
inline std::string random_smooth(std::mt19937_64& g, int depth) {
    const auto c = [&] { return format_real(std::round(uniform(g, 0.5, 3.0) * 4.0) / 4.0); };
    if (depth <= 1) return pick(g, 3) == 0 ? c() : "t";
    const std::string a = random_smooth(g, depth - 1);
    switch (pick(g, 9)) {
        case 0: return "(" + a + " + " + random_smooth(g, depth - 1) + ")";
        case 1: return "(" + a + " - " + random_smooth(g, depth - 1) + ")";
        case 2: return "(" + a + ")*(" + random_smooth(g, depth - 1) + ")";
        case 3: return "(" + a + ")/(" + c() + " + (" + random_smooth(g, depth - 1) + ")^2)";
        case 4: return "sin(" + a + ")";
        case 5: return "cos(" + a + ")";
        case 6: return "ln(" + c() + " + (" + a + ")^2)";
        case 7: return "sqrt(" + c() + " + (" + a + ")^2)";
        default: return "(" + a + ")^" + std::to_string(1 + pick(g, 3));
    }
}

}  // namespace fs_test
