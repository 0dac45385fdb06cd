#include "loadcap/report.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace loadcap::report {

namespace {

using Json = nlohmann::ordered_json;

Json vector_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json traction_json(const TractionField& t) {
  Json a = Json::array();
  for (std::size_t f = 0; f < t.facet_count(); ++f) {
    Json row = Json::array();
    for (int c = 0; c < t.dim; ++c) row.push_back(t.facet(f)[c]);
    a.push_back(std::move(row));
  }
  return a;
}

Json stress_json(const StressField& s) {
  Json a = Json::array();
  for (std::size_t e = 0; e < s.stresses.size(); ++e) {
    const SymMatrix& m = s.stresses[e];
    Json row = Json::array();
    for (int i = 0; i < m.dim(); ++i) {
      Json r = Json::array();
      for (int j = 0; j < m.dim(); ++j) r.push_back(m(i, j));
      row.push_back(std::move(r));
    }
    Json el = Json::object();
    el["sigma"] = std::move(row);
    if (!s.out_of_plane.empty()) el["sigma_33"] = s.out_of_plane[e];
    a.push_back(std::move(el));
  }
  return a;
}

Json header(std::string_view command, const Inputs& in, const DiscreteOperators& ops) {
  Json j = Json::object();
  j["tool"] = "loadcap";
  j["version"] = kToolVersion;
  j["command"] = command;
  Json inputs = Json::object();
  inputs["mesh"] = in.mesh_digest;
  if (!in.traction_digest.empty()) inputs["traction"] = in.traction_digest;
  j["inputs"] = std::move(inputs);
  j["mode"] = to_string(in.mode);
  j["norms"] = {{"strain", to_string(in.norms.primal)}, {"stress", to_string(in.norms.dual)}};
  j["mesh"] = {{"dim", ops.dim()},
               {"nodes", ops.mesh().nodes.size()},
               {"elements", ops.n_elements()},
               {"dofs", ops.n_dof()},
               {"traction_facets", ops.n_traction_facets()},
               {"boundary_components", ops.n_boundary_components()}};
  return j;
}

std::string finish(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string digest(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return std::string("fnv1a64:") + buf;
}

std::string analyze(const Inputs& in, const DiscreteOperators& ops, const TractionField& t,
                    const OptimalStressResult& r, const EquilibriumCheck& eq) {
  Json j = header("analyze", in, ops);
  j["traction_sup_norm"] = traction_sup_norm(ops, t);
  j["traction_sup_norm_scope"] = "all gammaT facets";
  Json res = Json::object();
  res["sigma_opt"] = r.sigma_opt;
  res["dual_value"] = r.dual_value;
  res["duality_gap"] = r.duality_gap;
  res["concentration_factor"] = r.sigma_opt / traction_sup_norm(ops, t);
  res["stress_measure"] = stress_measure(r.sigma_hat, r.mode, ops.norm_pair());
  res["equilibrium"] = {{"ok", eq.ok}, {"residual", eq.residual}};
  res["sigma_hat"] = stress_json(r.sigma_hat);
  res["dual_witness"] = vector_json(r.dual_witness.dofs);
  j["result"] = std::move(res);
  return finish(j);
}

std::string capacity(const Inputs& in, const DiscreteOperators& ops, const CapacityResult& r,
                     const std::optional<DualCheckResult>& dual, bool caps_hit) {
  Json j = header("capacity", in, ops);
  Json res = Json::object();
  res["method"] = to_string(r.method);
  res["K"] = r.K;
  const bool infinite = std::isinf(r.C);
  res["C"] = infinite ? Json(nullptr) : Json(r.C);
  res["C_infinite"] = infinite;
  res["lower_bound"] = r.lower_bound;
  res["caps_hit"] = caps_hit;
  res["iteration_cap_hit"] = r.iteration_cap_hit;
  res["lp_solves"] = r.lp_solves;
  res["worst_traction"] = traction_json(r.worst_traction);
  res["certificate"] = vector_json(r.certificate.dofs);
  if (dual) {
    res["dual_check"] = {{"K_prime", dual->K_prime},
                         {"difference", std::abs(dual->K_prime - r.K)},
                         {"argmax", traction_json(dual->argmax)}};
  }
  res["interpretation"] =
      r.mode == Mode::Plastic
          ? (infinite ? "no traction on gammaT can cause collapse"
                      : "no traction with |t|_inf <= C * Y0 on gammaT causes plastic collapse")
          : (infinite ? "tractions on gammaT induce no stress"
                      : "every traction t admits an equilibrating stress with max |sigma| <= "
                        "|t|_inf / C");
  j["result"] = std::move(res);
  return finish(j);
}

std::string limit(const Inputs& in, const DiscreteOperators& ops, const TractionField& t,
                  const LimitResult& r, const KinematicLimitCheck& k) {
  Json j = header("limit", in, ops);
  j["traction_sup_norm"] = traction_sup_norm(ops, t);
  j["traction_sup_norm_scope"] = "all gammaT facets";
  Json res = Json::object();
  res["Y0"] = r.Y0;
  res["sigma_opt"] = r.sigma_opt;
  res["lambda_star"] = r.lambda_star;
  res["state"] = r.lambda_star > 1.0 ? "safe" : (r.lambda_star < 1.0 ? "beyond collapse" : "at collapse");
  res["t_collapse"] = traction_json(r.t_collapse);
  res["sigma_opt_collapse"] = r.sigma_opt_collapse;
  res["kinematic"] = {{"lambda_static", k.lambda_static},
                      {"lambda_kinematic", k.lambda_kinematic},
                      {"gap", k.gap},
                      {"mechanism", vector_json(k.mechanism.dofs)}};
  j["result"] = std::move(res);
  return finish(j);
}

std::string verify(std::string_view mesh_digest, const VerifyReport& r) {
  Json j = Json::object();
  j["tool"] = "loadcap";
  j["version"] = kToolVersion;
  j["command"] = "verify";
  j["inputs"] = {{"mesh", mesh_digest}};
  j["seed"] = r.seed;
  j["trials"] = r.trials;
  j["passed"] = r.ok();
  Json checks = Json::array();
  for (const CheckTally& c : r.checks) {
    Json o = Json::object();
    o["name"] = c.name;
    o["passed"] = c.passed;
    o["total"] = c.total;
    o["ok"] = c.ok();
    o["worst"] = c.worst;
    if (!c.first_failure.empty()) o["first_failure"] = c.first_failure;
    if (!c.skipped.empty()) o["skipped"] = c.skipped;
    checks.push_back(std::move(o));
  }
  j["checks"] = std::move(checks);
  return finish(j);
}

}  // namespace loadcap::report
