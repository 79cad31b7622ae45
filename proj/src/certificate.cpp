#include "cqinterp/certificate.hpp"

namespace cqi {

Rat Certificate::eta_phi_mass(size_t s1) const {
    Rat total(0);
    for (size_t j = 0; j <= s1 && j < eta.size(); ++j) total += eta[j];
    return total;
}

namespace {

bool scope_ok(const SosDecomposition& h, const std::set<std::string>& allowed) {
    for (auto& sq : h.squares)
        if (!sq.form.uses_only(allowed)) return false;
    return true;
}

bool signs_ok(const SosDecomposition& h) {
    if (h.constant < 0) return false;
    for (auto& sq : h.squares)
        if (sq.coeff < 0) return false;
    return true;
}

} // namespace

ValidationReport verify_certificate(const ProblemPair& pair, const Certificate& cert) {
    ValidationReport rep;
    rep.symbol_scope_ok = true;

    auto fs = pair.fs();
    auto gs = pair.gs();
    if (cert.lambda.size() != fs.size() || cert.eta.size() != gs.size() + 1) {
        rep.detail = "multiplier count mismatch";
        return rep;
    }
    for (auto& l : cert.lambda)
        if (l < 0) { rep.detail = "negative lambda"; return rep; }
    for (auto& e : cert.eta)
        if (e < 0) { rep.detail = "negative eta"; return rep; }
    Rat eta_sum(0);
    for (auto& e : cert.eta) eta_sum += e;
    if (eta_sum != 1) {
        rep.detail = "eta does not sum to 1";
        return rep;
    }
    if (!signs_ok(cert.h1) || !signs_ok(cert.h2)) {
        rep.detail = "negative square weight";
        return rep;
    }

    std::set<std::string> xy(pair.part.x.begin(), pair.part.x.end());
    xy.insert(pair.part.y.begin(), pair.part.y.end());
    std::set<std::string> xz(pair.part.x.begin(), pair.part.x.end());
    xz.insert(pair.part.z.begin(), pair.part.z.end());
    if (!scope_ok(cert.h1, xy) || !scope_ok(cert.h2, xz)) {
        rep.symbol_scope_ok = false;
        rep.detail = "h1/h2 variable scope violation";
        return rep;
    }

    Polynomial total = Polynomial::constant(cert.eta[0]);
    for (size_t i = 0; i < fs.size(); ++i) total += fs[i] * cert.lambda[i];
    for (size_t j = 0; j < gs.size(); ++j) total += gs[j] * cert.eta[j + 1];
    total += cert.h1.reconstruct();
    total += cert.h2.reconstruct();
    if (!total.is_zero()) {
        rep.detail = "identity residual: " + total.str();
        return rep;
    }
    rep.certificate_ok = true;
    return rep;
}

} // namespace cqi
