#include "tempdyn/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "tempdyn/errors.hpp"

namespace tempdyn {

namespace {

// 15-point Kronrod abscissae (positive half) with the embedded 7-point Gauss
// rule on the odd-indexed nodes.
constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
    double a, b;
    double integral;
    double error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

// One G7/K15 application on [a, b] with a QUADPACK-style error estimate.
Interval gk15(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double fc = f(center);
    double resg = fc * wg[3];
    double resk = fc * wgk[7];
    double resabs = std::fabs(fc) * wgk[7];
    double fv[15];
    fv[7] = fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * xgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        resk += wgk[j] * (f1 + f2);
        resabs += wgk[j] * (std::fabs(f1) + std::fabs(f2));
        if (j % 2 == 1)
            resg += wg[j / 2] * (f1 + f2);
    }
    const double reskh = resk * 0.5;
    double resasc = wgk[7] * std::fabs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += wgk[j] * (std::fabs(fv[j] - reskh) + std::fabs(fv[14 - j] - reskh));
    resasc *= half;
    resabs *= half;

    double err = std::fabs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    if (resabs > tiny)
        err = std::max(err, resabs * 50.0 * std::numeric_limits<double>::epsilon());

    return Interval{a, b, resk * half, err};
}

} // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, double rel_tol, int max_evaluations) {
    if (!(a < b))
        throw validation_error("integrate: require a < b");

    QuadratureResult out;
    std::priority_queue<Interval> queue;
    Interval whole = gk15(f, a, b);
    out.evaluations = 15;
    double total = whole.integral;
    double total_err = whole.error;
    queue.push(whole);

    const auto tolerance = [&](double t) { return std::max(abs_tol, rel_tol * std::fabs(t)); };

    while (total_err > tolerance(total) && out.evaluations + 30 <= max_evaluations &&
           !queue.empty()) {
        Interval worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b)
            continue; // at floating-point resolution: keep its estimate, stop splitting it
        Interval left = gk15(f, worst.a, mid);
        Interval right = gk15(f, mid, worst.b);
        out.evaluations += 30;
        total += left.integral + right.integral - worst.integral;
        total_err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
    }

    out.value = total;
    out.error_estimate = total_err;
    out.converged = total_err <= tolerance(total);
    return out;
}

double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, double rel_tol, int max_evaluations) {
    const QuadratureResult r = integrate(f, a, b, abs_tol, rel_tol, max_evaluations);
    if (!r.converged)
        throw numeric_error("adaptive quadrature did not reach the requested tolerance "
                            "(error estimate " +
                            std::to_string(r.error_estimate) + ")");
    return r.value;
}

} // namespace tempdyn
