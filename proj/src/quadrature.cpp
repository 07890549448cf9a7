#include "pnlayer/quadrature.hpp"

#include "pnlayer/grid.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pnlayer {

namespace {

constexpr std::size_t kLimit = 2000;

struct Workspace {
    Workspace() : w(gsl_integration_workspace_alloc(kLimit)) { gsl_set_error_handler_off(); }
    ~Workspace() { gsl_integration_workspace_free(w); }
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;
    gsl_integration_workspace* w;
};

double trampoline(double s, void* p) { return (*static_cast<const std::function<double(double)>*>(p))(s); }

void check(int status, const char* what) {
    if (status != GSL_SUCCESS && status != GSL_EROUND) {
        throw std::runtime_error(std::string(what) + ": " + gsl_strerror(status));
    }
}

double qags(const std::function<double(double)>& g, double a, double b) {
    Workspace ws;
    gsl_function F{&trampoline, const_cast<std::function<double(double)>*>(&g)};
    double result = 0.0, err = 0.0;
    check(gsl_integration_qags(&F, a, b, 1e-13, 1e-11, kLimit, ws.w, &result, &err), "qags");
    return result;
}

}  // namespace

double hilbert_line(const std::function<double(double)>& f, double a, double b, double x) {
    if (x <= a || x >= b) {
        return qags([&](double s) { return f(s) / (x - s); }, a, b) / std::numbers::pi;
    }
    Workspace ws;
    gsl_function F{&trampoline, const_cast<std::function<double(double)>*>(&f)};
    double result = 0.0, err = 0.0;
    // qawc integrates f(s) / (s - x).
    check(gsl_integration_qawc(&F, a, b, x, 1e-13, 1e-11, kLimit, ws.w, &result, &err), "qawc");
    return -result / std::numbers::pi;
}

double hilbert_periodic(const std::function<double(double)>& f, double X, double x) {
    if (!(std::abs(x) < X)) throw InvalidArgument("hilbert_periodic needs |x| < X");
    const double c = std::numbers::pi / (2.0 * X);
    // cot kernel minus its 1/t singularity; smooth for |t| < 2X.
    auto r = [c](double t) {
        const double ct = c * t;
        if (std::abs(ct) < 1e-3) return -c * ct / 3.0 - c * ct * ct * ct / 45.0;
        return c / std::tan(ct) - 1.0 / t;
    };
    const double smooth = qags([&](double s) { return f(s) * r(x - s); }, -X, X) / std::numbers::pi;
    return hilbert_line(f, -X, X, x) + smooth;
}

}  // namespace pnlayer
