#include "gapsol/fourier.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace gapsol {

LatticeField1D::LatticeField1D(Parity parity, int truncation)
    : parity_(parity), trunc_(truncation) {
    if (truncation < 1) throw std::invalid_argument("truncation must be positive");
    max_ = truncation;
    if (!matches(parity_, max_)) --max_;
    c_.assign(static_cast<size_t>(max_) + 1, cplx{0.0});
}

void LatticeField1D::set(int m, cplx v) {
    if (!contains(m)) throw std::out_of_range("index outside parity lattice");
    c_[slot(m)] = v;
}

PotentialSpec PotentialSpec::from_pairs(const std::vector<std::pair<int, double>>& entries) {
    PotentialSpec w;
    for (auto [m, v] : entries) {
        if (m < 1) throw std::invalid_argument("potential entries require m >= 1");
        if (w.coeffs_.count(m)) throw std::invalid_argument("duplicate potential index m");
        w.coeffs_[m] = v;
        w.coeffs_[-m] = v;
        w.trunc_ = std::max(w.trunc_, m);
    }
    return w;
}

double PotentialSpec::w2m(int m) const {
    auto it = coeffs_.find(m);
    return it == coeffs_.end() ? 0.0 : it->second;
}

double PotentialSpec::sum_abs() const {
    double s = 0.0;
    for (auto& [m, v] : coeffs_) s += std::abs(v);
    return s;
}

double PotentialSpec::eval(double x) const {
    double s = 0.0;
    for (auto& [m, v] : coeffs_)
        if (m > 0) s += 2.0 * v * std::cos(m * x);
    return s;
}

PotentialSpec parse_potential(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& err) {
        throw std::runtime_error(std::string("potential file: ") + err.what());
    }
    if (!j.contains("coeffs") || !j["coeffs"].is_array())
        throw std::runtime_error("potential file: missing \"coeffs\" array");
    std::vector<std::pair<int, double>> entries;
    for (auto& e : j["coeffs"]) {
        if (!e.contains("m") || !e.contains("w"))
            throw std::runtime_error("potential file: entries need \"m\" and \"w\"");
        entries.emplace_back(e["m"].get<int>(), e["w"].get<double>());
    }
    try {
        return PotentialSpec::from_pairs(entries);
    } catch (const std::invalid_argument& err) {
        throw std::runtime_error(std::string("potential file: ") + err.what());
    }
}

PotentialSpec load_potential(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open potential file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_potential(ss.str());
}

LatticeField1D convolve(const LatticeField1D& u, const LatticeField1D& v, int out_trunc) {
    if (u.truncation() != v.truncation())
        throw std::invalid_argument("convolve: mismatched truncations");
    LatticeField1D out(combine(u.parity(), v.parity()), out_trunc);
    for (int i = 0; i < out.size(); ++i) {
        int m = out.index_at(i);
        cplx acc{0.0};
        for (int j = 0; j < u.size(); ++j) {
            int k = u.index_at(j);
            acc += u.data()[j] * v.get(m - k);
        }
        out.data()[i] = acc;
    }
    return out;
}

LatticeField1D convolve(const LatticeField1D& u, const LatticeField1D& v) {
    return convolve(u, v, u.truncation());
}

LatticeField1D reverse_conjugate(const LatticeField1D& u) {
    LatticeField1D out(u.parity(), u.truncation());
    for (int i = 0; i < out.size(); ++i)
        out.data()[i] = std::conj(u.get(-out.index_at(i)));
    return out;
}

LatticeField1D cubic_term(const LatticeField1D& u) {
    // Intermediate radius 2M keeps the triple sum exact before the final
    // truncation to |m| <= M.
    LatticeField1D mid = convolve(u, reverse_conjugate(u), 2 * u.truncation());
    LatticeField1D out(u.parity(), u.truncation());
    for (int i = 0; i < out.size(); ++i) {
        int m = out.index_at(i);
        cplx acc{0.0};
        for (int j = 0; j < u.size(); ++j) {
            int k = u.index_at(j);
            acc += mid.get(m - k) * u.data()[j];
        }
        out.data()[i] = acc;
    }
    return out;
}

LatticeField1D apply_potential(const PotentialSpec& w, const LatticeField1D& u) {
    LatticeField1D out(u.parity(), u.truncation());
    for (int i = 0; i < out.size(); ++i) {
        int m = out.index_at(i);
        cplx acc{0.0};
        for (auto& [mw, v] : w.coeffs()) {
            // w index in lattice units is 2*mw
            acc += v * u.get(m - 2 * mw);
        }
        out.data()[i] = acc;
    }
    return out;
}

double weighted_norm(const LatticeField1D& u, double s) {
    if (s < 0) throw std::invalid_argument("weighted_norm: s must be >= 0");
    double acc = 0.0;
    for (int i = 0; i < u.size(); ++i) {
        double m = u.index_at(i);
        acc += std::pow(1.0 + 0.25 * m * m, s) * std::norm(u.data()[i]);
    }
    return std::sqrt(acc);
}

std::vector<cplx> synthesize(const LatticeField1D& u, double eps, std::span<const double> xs) {
    if (eps < 0) throw std::invalid_argument("synthesize: eps must be >= 0");
    const double amp = std::sqrt(eps);
    std::vector<cplx> out(xs.size());
    for (size_t p = 0; p < xs.size(); ++p) {
        cplx acc{0.0};
        for (int i = 0; i < u.size(); ++i) {
            double m = u.index_at(i);
            acc += u.data()[i] * std::polar(1.0, 0.5 * m * xs[p]);
        }
        out[p] = amp * acc;
    }
    return out;
}

bool is_real_symmetric(const LatticeField1D& u, double tol) {
    for (int i = 0; i < u.size(); ++i) {
        int m = u.index_at(i);
        if (std::abs(u.get(-m) - std::conj(u.get(m))) > tol) return false;
    }
    return true;
}

} // namespace gapsol
