#include "mcl/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mcl {

ContactLaw::ContactLaw(double kappa, double cubic_c) : kappa_(kappa), c_(cubic_c) {}

ContactLaw ContactLaw::tabulated(double kappa, const Vec& z, const Vec& w) {
    if (z.size() != w.size() || z.size() < 3)
        throw std::invalid_argument("contact law table needs >= 3 samples");
    for (int i = 1; i < z.size(); ++i) {
        if (z[i] <= z[i - 1]) throw std::invalid_argument("contact law table: z not increasing");
        if (w[i] <= w[i - 1]) throw std::invalid_argument("contact law table: W not increasing");
    }
    ContactLaw law;
    law.kappa_ = kappa;
    law.tab_ = true;
    law.tz_ = z;
    law.tw_ = w;
    // monotone Hermite slopes (Fritsch-Carlson)
    const int n = int(z.size());
    Vec d(n - 1);
    for (int i = 0; i < n - 1; ++i) d[i] = (w[i + 1] - w[i]) / (z[i + 1] - z[i]);
    law.tm_ = Vec(n);
    law.tm_[0] = d[0];
    law.tm_[n - 1] = d[n - 2];
    for (int i = 1; i < n - 1; ++i) law.tm_[i] = 0.5 * (d[i - 1] + d[i]);
    for (int i = 0; i < n - 1; ++i) {
        double a = law.tm_[i] / d[i], b = law.tm_[i + 1] / d[i];
        double s = a * a + b * b;
        if (s > 9.0) {
            double t = 3.0 / std::sqrt(s);
            law.tm_[i] = t * a * d[i];
            law.tm_[i + 1] = t * b * d[i];
        }
    }
    return law;
}

double ContactLaw::response(double z) const {
    if (!tab_) return kappa_ * z + kappa_ * c_ * z * z * z;
    const int n = int(tz_.size());
    int i = int(std::upper_bound(tz_.data(), tz_.data() + n, z) - tz_.data()) - 1;
    i = std::clamp(i, 0, n - 2);
    double h = tz_[i + 1] - tz_[i], t = (z - tz_[i]) / h;
    double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    return h00 * tw_[i] + h10 * h * tm_[i] + h01 * tw_[i + 1] + h11 * h * tm_[i + 1];
}

double ContactLaw::hatW(double z) const {
    if (!tab_) return c_ * z * z * z;
    return response(z) / kappa_ - z;
}

double ContactLaw::hatWp(double z) const {
    if (!tab_) return 3.0 * c_ * z * z;
    double h = 1e-6 * std::max(1.0, std::abs(z));
    return (hatW(z + h) - hatW(z - h)) / (2 * h);
}

double ContactLaw::hatWpp(double z) const {
    if (!tab_) return 6.0 * c_ * z;
    double h = 1e-4 * std::max(1.0, std::abs(z));
    return (hatW(z + h) - 2 * hatW(z) + hatW(z - h)) / (h * h);
}

std::string ValidationReport::str() const {
    if (violations.empty()) return "0 violations";
    std::ostringstream os;
    os << violations.size() << " violation" << (violations.size() > 1 ? "s" : "") << ":";
    for (const auto& v : violations) os << "\n  - " << v;
    return os.str();
}

double eps_max_of(double omega_eq) { return std::min(1.0, -1.0 + M_PI / omega_eq); }

ValidationReport validate(const PhysicalParams& p, const SobolevIndices& ix) {
    ValidationReport r;
    auto need = [&](bool ok, const std::string& what) {
        if (!ok) r.violations.push_back(what);
    };
    need(p.mu > 0, "mu > 0");
    need(p.sigma > 0, "sigma > 0");
    need(p.g >= 0, "g >= 0");
    need(p.beta > 0, "beta > 0");
    need(p.kappa > 0, "kappa > 0");
    need(p.ell > 0, "ell > 0");
    need(p.volume > 0, "volume > 0");
    need(p.bottom_depth > 0, "bottom_depth > 0");
    need(std::abs(p.gamma_jump) < p.sigma, "Young relation |gamma_jump| < sigma");

    need(ix.omega_eq > 0 && ix.omega_eq < M_PI, "omega_eq in (0, pi)");
    const double em = eps_max_of(ix.omega_eq);
    need(std::abs(ix.eps_max - em) <= 1e-12 * std::max(1.0, std::abs(em)),
         "eps_max = min{1, -1 + pi/omega_eq}");
    need(ix.alpha > 0, "alpha > 0");
    need(ix.alpha < ix.eps_minus, "alpha < eps_minus");
    need(ix.eps_minus < ix.eps_plus, "eps_minus < eps_plus");
    need(ix.eps_plus < em, "eps_plus < eps_max");
    need(ix.alpha < ix.eps_minus / 2, "alpha < eps_minus/2");
    need(ix.alpha < (ix.eps_plus - ix.eps_minus) / 2, "alpha < (eps_plus - eps_minus)/2");
    need(ix.eps_plus <= (ix.eps_minus + 1) / 2, "eps_plus <= (eps_minus + 1)/2");

    const double qm = 2.0 / (2.0 - ix.eps_minus), qp = 2.0 / (2.0 - ix.eps_plus);
    need(ix.q_minus == qm, "q_minus = 2/(2 - eps_minus)");
    need(ix.q_plus == qp, "q_plus = 2/(2 - eps_plus)");
    return r;
}

SobolevIndices derive_indices(double omega_eq, double alpha, double eps_minus, double eps_plus) {
    if (!(omega_eq > 0 && omega_eq < M_PI)) throw ChainViolation("omega_eq in (0, pi)");
    const double em = eps_max_of(omega_eq);
    if (!(alpha > 0)) throw ChainViolation("alpha > 0");
    if (!(alpha < eps_minus)) throw ChainViolation("alpha < eps_minus");
    if (!(eps_minus < eps_plus)) throw ChainViolation("eps_minus < eps_plus");
    if (!(eps_plus < em)) throw ChainViolation("eps_plus < eps_max");
    if (!(alpha < eps_minus / 2)) throw ChainViolation("alpha < eps_minus/2");
    if (!(alpha < (eps_plus - eps_minus) / 2))
        throw ChainViolation("alpha < (eps_plus - eps_minus)/2");
    if (!(eps_plus <= (eps_minus + 1) / 2)) throw ChainViolation("eps_plus <= (eps_minus + 1)/2");
    SobolevIndices ix;
    ix.omega_eq = omega_eq;
    ix.eps_max = em;
    ix.alpha = alpha;
    ix.eps_minus = eps_minus;
    ix.eps_plus = eps_plus;
    ix.q_minus = 2.0 / (2.0 - eps_minus);
    ix.q_plus = 2.0 / (2.0 - eps_plus);
    return ix;
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

using KV = std::map<std::string, std::string>;

std::map<std::string, KV> parse_sections(const std::string& text) {
    std::map<std::string, KV> out;
    std::istringstream is(text);
    std::string line, section;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        out[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

void apply_env_overrides(std::map<std::string, KV>& sections) {
    static const char* names[] = {"physical", "indices", "law", "discretization", "run"};
    for (const char* sec : names) {
        for (auto& [key, val] : sections[sec]) {
            std::string env = "MCL_" + std::string(sec) + "_" + key;
            std::transform(env.begin(), env.end(), env.begin(), ::toupper);
            if (const char* v = std::getenv(env.c_str())) val = v;
        }
    }
    // Also pick up env keys that the file never mentioned.
    for (const char* sec : names) {
        static const char* known[] = {
            "mu", "sigma", "g", "beta", "kappa", "gamma_jump", "ell", "volume", "bottom_depth",
            "omega_eq", "alpha", "eps_minus", "eps_plus", "cubic_c", "nx", "ny_top", "ny_bot",
            "basis_m", "surface_modes", "cheb_n", "epsilon", "dt", "t_final", "t_cap",
            "time_scale", "amplitude", "mode", "delta", "fp_tol", "max_iter", "epsilon_list",
            "equilibrium_tol", "seed", "threads"};
        for (const char* key : known) {
            std::string env = "MCL_" + std::string(sec) + "_" + key;
            std::transform(env.begin(), env.end(), env.begin(), ::toupper);
            if (const char* v = std::getenv(env.c_str())) sections[sec][key] = v;
        }
    }
}

double getd(const KV& kv, const std::string& k, double def) {
    auto it = kv.find(k);
    return it == kv.end() ? def : std::stod(it->second);
}
long long geti(const KV& kv, const std::string& k, long long def) {
    auto it = kv.find(k);
    return it == kv.end() ? def : std::stoll(it->second);
}

std::vector<double> getlist(const KV& kv, const std::string& k, std::vector<double> def) {
    auto it = kv.find(k);
    if (it == kv.end()) return def;
    std::vector<double> out;
    std::string tok;
    std::istringstream is(it->second);
    while (std::getline(is, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

}  // namespace

Config parse_config(const std::string& text) {
    auto sections = parse_sections(text);
    apply_env_overrides(sections);
    Config c;
    const KV& ph = sections["physical"];
    c.physical.mu = getd(ph, "mu", c.physical.mu);
    c.physical.sigma = getd(ph, "sigma", c.physical.sigma);
    c.physical.g = getd(ph, "g", c.physical.g);
    c.physical.beta = getd(ph, "beta", c.physical.beta);
    c.physical.kappa = getd(ph, "kappa", c.physical.kappa);
    c.physical.gamma_jump = getd(ph, "gamma_jump", c.physical.gamma_jump);
    c.physical.ell = getd(ph, "ell", c.physical.ell);
    c.physical.volume = getd(ph, "volume", c.physical.volume);
    c.physical.bottom_depth = getd(ph, "bottom_depth", c.physical.bottom_depth);

    const KV& ik = sections["indices"];
    double omega = getd(ik, "omega_eq", c.indices.omega_eq);
    double alpha = getd(ik, "alpha", c.indices.alpha);
    double epsm = getd(ik, "eps_minus", c.indices.eps_minus);
    double epsp = getd(ik, "eps_plus", c.indices.eps_plus);
    c.indices.omega_eq = omega;
    c.indices.alpha = alpha;
    c.indices.eps_minus = epsm;
    c.indices.eps_plus = epsp;
    c.indices.eps_max = eps_max_of(omega);
    c.indices.q_minus = 2.0 / (2.0 - epsm);
    c.indices.q_plus = 2.0 / (2.0 - epsp);

    const KV& lw = sections["law"];
    c.law_cubic_c = getd(lw, "cubic_c", c.law_cubic_c);
    c.law = ContactLaw(c.physical.kappa, c.law_cubic_c);

    const KV& dc = sections["discretization"];
    c.discretization.nx = int(geti(dc, "nx", c.discretization.nx));
    c.discretization.ny_top = int(geti(dc, "ny_top", c.discretization.ny_top));
    c.discretization.ny_bot = int(geti(dc, "ny_bot", c.discretization.ny_bot));
    c.discretization.basis_m = int(geti(dc, "basis_m", c.discretization.basis_m));
    c.discretization.surface_modes = int(geti(dc, "surface_modes", c.discretization.surface_modes));
    c.discretization.cheb_n = int(geti(dc, "cheb_n", c.discretization.cheb_n));

    const KV& rn = sections["run"];
    c.run.epsilon = getd(rn, "epsilon", c.run.epsilon);
    c.run.dt = getd(rn, "dt", c.run.dt);
    c.run.t_final = getd(rn, "t_final", c.run.t_final);
    c.run.t_cap = getd(rn, "t_cap", c.run.t_cap);
    c.run.time_scale = getd(rn, "time_scale", c.run.time_scale);
    c.run.amplitude = getd(rn, "amplitude", c.run.amplitude);
    c.run.mode = int(geti(rn, "mode", c.run.mode));
    c.run.delta = getd(rn, "delta", c.run.delta);
    c.run.fp_tol = getd(rn, "fp_tol", c.run.fp_tol);
    c.run.max_iter = int(geti(rn, "max_iter", c.run.max_iter));
    c.run.epsilon_list = getlist(rn, "epsilon_list", c.run.epsilon_list);
    c.run.equilibrium_tol = getd(rn, "equilibrium_tol", c.run.equilibrium_tol);
    c.run.seed = (unsigned long long)geti(rn, "seed", (long long)c.run.seed);
    c.run.threads = int(geti(rn, "threads", c.run.threads));
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return parse_config(os.str());
}

std::string dump_config(const Config& c) {
    std::ostringstream os;
    os.precision(17);
    os << "[physical]\n"
       << "mu = " << c.physical.mu << "\nsigma = " << c.physical.sigma << "\ng = " << c.physical.g
       << "\nbeta = " << c.physical.beta << "\nkappa = " << c.physical.kappa
       << "\ngamma_jump = " << c.physical.gamma_jump << "\nell = " << c.physical.ell
       << "\nvolume = " << c.physical.volume << "\nbottom_depth = " << c.physical.bottom_depth
       << "\n\n[indices]\n"
       << "omega_eq = " << c.indices.omega_eq << "\nalpha = " << c.indices.alpha
       << "\neps_minus = " << c.indices.eps_minus << "\neps_plus = " << c.indices.eps_plus
       << "\n\n[law]\ncubic_c = " << c.law_cubic_c << "\n\n[discretization]\n"
       << "nx = " << c.discretization.nx << "\nny_top = " << c.discretization.ny_top
       << "\nny_bot = " << c.discretization.ny_bot << "\nbasis_m = " << c.discretization.basis_m
       << "\nsurface_modes = " << c.discretization.surface_modes
       << "\ncheb_n = " << c.discretization.cheb_n << "\n\n[run]\n"
       << "epsilon = " << c.run.epsilon << "\ndt = " << c.run.dt << "\nt_final = " << c.run.t_final
       << "\nt_cap = " << c.run.t_cap << "\ntime_scale = " << c.run.time_scale
       << "\namplitude = " << c.run.amplitude << "\nmode = " << c.run.mode
       << "\ndelta = " << c.run.delta << "\nfp_tol = " << c.run.fp_tol
       << "\nmax_iter = " << c.run.max_iter << "\nepsilon_list = ";
    for (size_t i = 0; i < c.run.epsilon_list.size(); ++i)
        os << (i ? "," : "") << c.run.epsilon_list[i];
    os << "\nequilibrium_tol = " << c.run.equilibrium_tol << "\nseed = " << c.run.seed
       << "\nthreads = " << c.run.threads << "\n";
    return os.str();
}

}  // namespace mcl
