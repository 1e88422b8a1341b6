#include "tempdyn/special.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tempdyn/errors.hpp"

namespace tempdyn {

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr double eps = std::numeric_limits<double>::epsilon();
const double log_dbl_min = std::log(std::numeric_limits<double>::min());

// Taylor coefficients of 1/Gamma(1+x) about x=0 (Abramowitz & Stegun 6.1.34).
constexpr double inv_gamma_coeff[13] = {
    1.0,
    0.57721566490153286,
    -0.65587807152025388,
    -0.042002635034095236,
    0.16653861138229149,
    -0.042197734555544337,
    -0.0096219715278769736,
    0.0072189432466630995,
    -0.0011651675918590651,
    -0.00021524167411495098,
    0.00012805028238811619,
    -0.0000201348547807882,
    -0.0000012504934821426706,
};

// gam1 = (1/Gamma(1-x) - 1/Gamma(1+x)) / (2x)
// gam2 = (1/Gamma(1-x) + 1/Gamma(1+x)) / 2
// for |x| <= 1/2 (Temme's auxiliary functions).
void gamma_temme(double x, double& gam1, double& gam2, double& inv_gamma_1px,
                 double& inv_gamma_1mx) {
    if (std::fabs(x) < 0.02) {
        // Series form avoids the subtractive cancellation in gam1 near x = 0.
        double plus = 0.0, minus = 0.0, xp = 1.0;
        for (int k = 0; k < 13; ++k) {
            plus += inv_gamma_coeff[k] * xp;
            minus += (k % 2 ? -inv_gamma_coeff[k] : inv_gamma_coeff[k]) * xp;
            xp *= x;
        }
        inv_gamma_1px = plus;
        inv_gamma_1mx = minus;
        double odd = 0.0, x2k = 1.0;
        const double xx = x * x;
        for (int k = 1; k < 13; k += 2) {
            odd += inv_gamma_coeff[k] * x2k;
            x2k *= xx;
        }
        gam1 = -odd;
        gam2 = (minus + plus) / 2.0;
    } else {
        inv_gamma_1px = 1.0 / std::tgamma(1.0 + x);
        inv_gamma_1mx = 1.0 / std::tgamma(1.0 - x);
        gam1 = (inv_gamma_1mx - inv_gamma_1px) / (2.0 * x);
        gam2 = (inv_gamma_1mx + inv_gamma_1px) / 2.0;
    }
}

// K_mu(x) and K_{mu+1}(x) for |mu| <= 1/2, 0 < x <= 2 (Temme's series).
void bessel_k_temme(double mu, double x, double& k_mu, double& k_mu1) {
    const double x2 = 0.5 * x;
    const double pimu = pi * mu;
    const double fact = (std::fabs(pimu) < eps) ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = (std::fabs(e) < eps) ? 1.0 : std::sinh(e) / e;
    double gam1, gam2, gampl, gammi;
    gamma_temme(mu, gam1, gam2, gampl, gammi);
    double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / gampl;
    double q = 0.5 / (e * gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    const double mu2 = mu * mu;
    for (int i = 1; i <= 1000; ++i) {
        ff = (i * ff + p + q) / (i * i - mu2);
        c *= d / i;
        p /= (i - mu);
        q /= (i + mu);
        const double del = c * ff;
        sum += del;
        const double del1 = c * (p - i * ff);
        sum1 += del1;
        if (std::fabs(del) < std::fabs(sum) * eps)
            break;
    }
    k_mu = sum;
    k_mu1 = sum1 * (2.0 / x);
}

// Scaled e^x K_mu(x) and e^x K_{mu+1}(x) for |mu| <= 1/2, x > 2
// (Steed's continued fraction CF2).
void bessel_k_steed_scaled(double mu, double x, double& k_mu_s, double& k_mu1_s) {
    const double mu2 = mu * mu;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double delh = d;
    double h = delh;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25 - mu2;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= 10000; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::fabs(dels / s) < eps)
            break;
    }
    h = a1 * h;
    k_mu_s = std::sqrt(pi / (2.0 * x)) / s;
    k_mu1_s = k_mu_s * (mu + x + 0.5 - h) / x;
}

} // namespace

BesselK bessel_k_full(double nu, double x) {
    if (!(x > 0.0))
        throw validation_error("bessel_k: x must be > 0, got " + std::to_string(x));
    if (!std::isfinite(nu))
        throw validation_error("bessel_k: order must be finite");

    nu = std::fabs(nu); // K_{-nu} == K_nu
    const int steps = int(nu + 0.5);
    const double mu = nu - steps; // |mu| <= 1/2

    // k0/k1 are e^x-scaled so that large x cannot underflow mid-computation.
    double k0, k1;
    if (x <= 2.0) {
        bessel_k_temme(mu, x, k0, k1);
        const double ex = std::exp(x); // <= e^2
        k0 *= ex;
        k1 *= ex;
    } else {
        bessel_k_steed_scaled(mu, x, k0, k1);
    }
    // Upward recurrence K_{m+1} = K_{m-1} + (2m/x) K_m holds for the scaled
    // values as well; it is stable because K grows with the order.
    for (int i = 1; i < steps; ++i) {
        const double knext = k0 + (2.0 * (mu + i) / x) * k1;
        k0 = k1;
        k1 = knext;
    }
    const double scaled = (steps == 0) ? k0 : k1;

    BesselK out;
    out.scaled = scaled;
    out.log_value = std::log(scaled) - x;
    out.underflow = out.log_value < log_dbl_min;
    out.value = out.underflow ? 0.0 : scaled * std::exp(-x);
    return out;
}

double bessel_k(double nu, double x) { return bessel_k_full(nu, x).value; }

double bessel_k_scaled(double nu, double x) { return bessel_k_full(nu, x).scaled; }

double log_bessel_k(double nu, double x) { return bessel_k_full(nu, x).log_value; }

namespace {

// Series representation of P(a,x), valid for x < a+1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 1; n <= 10000; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * eps)
            break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x) (modified Lentz), valid for x >= a+1.
double gamma_q_cf(double a, double x) {
    const double fpmin = std::numeric_limits<double>::min() / eps;
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 10000; ++i) {
        const double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < fpmin)
            d = fpmin;
        c = b + an / c;
        if (std::fabs(c) < fpmin)
            c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps)
            break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace

double gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0)
        throw validation_error("gamma_p: require a > 0 and x >= 0");
    if (x == 0.0)
        return 0.0;
    return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0)
        throw validation_error("gamma_q: require a > 0 and x >= 0");
    if (x == 0.0)
        return 1.0;
    return (x < a + 1.0) ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi_squared_sf(double x, double df) {
    if (!(df > 0.0))
        throw validation_error("chi_squared_sf: df must be > 0");
    if (x <= 0.0)
        return 1.0;
    return gamma_q(df / 2.0, x / 2.0);
}

double norm_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * pi); }

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw validation_error("norm_quantile: p must lie in (0, 1)");

    // Acklam's rational approximation, then one Halley step through norm_cdf.
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    const double e = norm_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * pi) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

} // namespace tempdyn
