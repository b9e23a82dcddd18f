#ifndef ERT_CERTIFICATE_HPP
#define ERT_CERTIFICATE_HPP

// Full verification run for one alpha and its JSON / plain-text reports.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "ert/error.hpp"
#include "ert/microlocal.hpp"

namespace ert {

struct VerificationReport {
  double alpha = 0.0;
  BolkerCertificate bolker;
  LemmaReport lemma1;
  LemmaReport lemma2;
  PropositionReport prop1;
  PropositionReport prop2;

  // Propositions only need to hold where their hypotheses apply, and at least
  // one of them must cover alpha.
  bool pass() const {
    auto prop_ok = [](const PropositionReport& p) { return !p.hypothesis || p.pass; };
    return bolker.pass() && lemma1.pass && lemma2.pass && prop_ok(prop1) && prop_ok(prop2) &&
           (prop1.pass || prop2.pass);
  }
};

inline VerificationReport run_verification(double alpha, const BolkerGrid& grid = {}) {
  const ScanGeometry g(alpha);
  VerificationReport r;
  r.alpha = alpha;
  r.bolker = bolker_certificate(alpha, grid);
  const SweepGrid sweep{grid.n_L, grid.n_phi};
  r.lemma1 = lemma1_check(g, sweep);
  r.lemma2 = lemma2_check(g, sweep);
  r.prop1 = prop1_check(alpha);
  r.prop2 = prop2_check(alpha);
  return r;
}

inline const char* status(bool pass) { return pass ? "pass" : "fail"; }

inline const char* proposition_status(const PropositionReport& p) {
  if (!p.hypothesis) return "not_applicable";
  return status(p.pass);
}

inline nlohmann::json to_json(const Location& l) { return {{"L", l.L}, {"phi", l.phi}, {"rho", l.rho}}; }

inline nlohmann::json to_json(const CheckResult& c) {
  return {{"name", c.name},         {"status", status(c.pass)}, {"min_margin", c.min_margin},
          {"argmin", to_json(c.argmin)}, {"samples", c.samples},    {"detail", c.detail}};
}

inline nlohmann::json to_json(const LemmaReport& l) {
  return {{"name", l.name},
          {"status", status(l.pass)},
          {"bound", l.bound},
          {"extremal_admissible", l.extremal},
          {"min_margin", l.bound - l.extremal},
          {"argmin", to_json(l.extremal_at)},
          {"admissible_samples", l.admissible},
          {"violations", l.violations},
          {"grid", {{"n_rho", l.n_rho}, {"n_phi", l.n_phi}}}};
}

inline nlohmann::json to_json(const PropositionReport& p) {
  nlohmann::json values = nlohmann::json::object();
  for (const auto& [k, v] : p.values) values[k] = v;
  return {{"name", p.name},
          {"status", proposition_status(p)},
          {"hypothesis", p.hypothesis},
          {"inequality", p.inequality},
          {"min_margin", p.margin},
          {"values", values}};
}

inline nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.bolker.checks) checks.push_back(to_json(c));
  checks.push_back(to_json(r.lemma1));
  checks.push_back(to_json(r.lemma2));
  checks.push_back(to_json(r.prop1));
  checks.push_back(to_json(r.prop2));
  const ScanGeometry g(r.alpha);
  return {{"alpha", r.alpha},
          {"a", g.a()},
          {"b", g.b()},
          {"grid", {{"n_L", r.bolker.grid.n_L}, {"n_phi", r.bolker.grid.n_phi}, {"fd_step", r.bolker.grid.fd_step}}},
          {"fio_order", r.bolker.order},
          {"note", "sampled numerical certificate on finite grids; not a proof"},
          {"status", status(r.pass())},
          {"checks", checks}};
}

inline std::string to_text(const VerificationReport& r) {
  std::ostringstream os;
  os.precision(10);
  os << "# Numerical certificate (sampled on finite grids; not a proof)\n"
     << "alpha = " << r.alpha << "\n"
     << "grid = " << r.bolker.grid.n_L << " x " << r.bolker.grid.n_phi << "\n"
     << "fio_order = " << r.bolker.order << "\n";
  for (const auto& c : r.bolker.checks) {
    os << c.name << ": " << status(c.pass) << "  min_margin=" << c.min_margin << "  at L=" << c.argmin.L
       << " phi=" << c.argmin.phi << "\n";
  }
  for (const LemmaReport* l : {&r.lemma1, &r.lemma2}) {
    os << l->name << ": " << status(l->pass) << "  bound=" << l->bound << "  extremal=" << l->extremal
       << "  violations=" << l->violations << "\n";
  }
  for (const PropositionReport* p : {&r.prop1, &r.prop2}) {
    os << p->name << ": " << proposition_status(*p) << "  margin=" << p->margin << "\n";
  }
  os << "overall: " << status(r.pass()) << "\n";
  return os.str();
}

}  // namespace ert

#endif  // ERT_CERTIFICATE_HPP
