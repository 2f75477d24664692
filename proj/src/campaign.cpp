#include "spintractor/campaign.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "spintractor/parallel.hpp"

namespace spintractor {

namespace {

using nlohmann::json;

const std::map<std::string, Campaign>& campaign_names() {
  static const std::map<std::string, Campaign> names{{"verify_twistor", Campaign::verify_twistor},
                                                     {"covariance", Campaign::covariance},
                                                     {"two_form", Campaign::two_form},
                                                     {"orbit", Campaign::orbit},
                                                     {"zero_set", Campaign::zero_set}};
  return names;
}

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

Spinor spinor_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + " must be an array");
  Spinor s(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& c = j[i];
    if (c.is_number())
      s(static_cast<Eigen::Index>(i)) = Complex(c.get<double>(), 0.0);
    else if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number())
      s(static_cast<Eigen::Index>(i)) = Complex(c[0].get<double>(), c[1].get<double>());
    else
      throw ConfigError(what + " entries must be numbers or [re, im] pairs");
  }
  return s;
}

json spinor_to_json(const Spinor& s) {
  json out = json::array();
  for (Eigen::Index i = 0; i < s.size(); ++i) out.push_back({s(i).real(), s(i).imag()});
  return out;
}

std::vector<Vec> sample_points(const Box& box, int count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-0.9, 0.9);
  std::vector<Vec> pts;
  const Vec c = box.center();
  const Vec half = 0.5 * (box.hi - box.lo);
  for (int k = 0; k < count; ++k) {
    Vec x(box.dim());
    for (int i = 0; i < box.dim(); ++i) x(i) = c(i) + unif(rng) * half(i);
    pts.push_back(x);
  }
  return pts;
}

Series point_series(const std::string& name, const std::vector<Vec>& pts, const std::vector<double>& values,
                    const std::string& column) {
  Series s;
  s.name = name;
  s.header.push_back("point");
  for (Eigen::Index i = 0; i < (pts.empty() ? 0 : pts.front().size()); ++i) s.header.push_back("x" + std::to_string(i));
  s.header.push_back(column);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    std::vector<double> row{static_cast<double>(k)};
    row.insert(row.end(), pts[k].data(), pts[k].data() + pts[k].size());
    row.push_back(values[k]);
    s.rows.push_back(std::move(row));
  }
  return s;
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

struct Context {
  const RunConfig& cfg;
  const Setup& setup;
  const std::vector<Vec>& points;
  Tolerances tol;
  std::vector<Series>& series;
};

json verify_twistor(const Context& c) {
  const auto& [patch, rep, sol] = c.setup;
  const std::size_t m = c.points.size();
  std::vector<double> residual(m), mismatch(m), integrability(m), penrose(m), schouten(m);
  json out;
  std::optional<TwistorField> lifted;
  try {
    lifted = lift_to_twistor(patch, rep, sol, c.tol.twistor);
  } catch (const NotASolution& e) {
    out["lift_error"] = e.what();
  }
  parallel_for(m, [&](std::size_t k) {
    const Vec& x = c.points[k];
    const auto r = twistor_residual(patch, rep, sol.phi, x);
    residual[k] = r.residual_norm;
    mismatch[k] = (r.dirac_value - sol.dirac.value(x)).norm();
    integrability[k] = dphi_schouten_check(patch, rep, sol.phi, sol.dirac, x);
    if (lifted) {
      const auto pr = parallel_twistor_residual(patch, rep, *lifted, x);
      penrose[k] = pr.penrose;
      schouten[k] = pr.schouten;
    }
  });
  out["points"] = m;
  out["max_residual"] = max_of(residual);
  out["max_dirac_mismatch"] = max_of(mismatch);
  out["max_integrability"] = max_of(integrability);
  out["max_pair_penrose"] = max_of(penrose);
  out["max_pair_schouten"] = max_of(schouten);
  out["pass"] = lifted.has_value() && max_of(residual) <= c.tol.twistor && max_of(mismatch) <= c.tol.twistor &&
                max_of(integrability) <= c.tol.integrability && max_of(penrose) <= c.tol.pair &&
                max_of(schouten) <= c.tol.pair;
  c.series.push_back(point_series("twistor_residual", c.points, residual, "residual"));
  return out;
}

json covariance(const Context& c) {
  const auto& [patch, rep, sol] = c.setup;
  const int n = patch.dim();
  std::mt19937_64 rng(c.cfg.seed ^ 0xc0f1u);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  auto rvec = [&](double scale) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = scale * unif(rng);
    return v;
  };
  Mat q(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) q(i, k) = 0.2 * unif(rng);
  q = (0.5 * (q + q.transpose())).eval();
  const Vec center = patch.domain().center();
  const std::vector<RescaleFunction> fs{RescaleFunction::zero(n), RescaleFunction::linear(0.1, rvec(0.3)),
                                        RescaleFunction::quadratic(0.0, rvec(0.1), q),
                                        RescaleFunction::bump(0.4, center + rvec(0.2), 0.8)};
  json out;
  out["functions"] = json::array();
  double worst = 0.0, base = 0.0;
  try {
    for (const auto& f : fs) {
      const CovarianceReport r = covariance_check(patch, rep, sol.phi, f, c.points, c.tol.twistor);
      out["functions"].push_back({{"rescale", f.to_json()}, {"max_rescaled_residual", r.max_rescaled_residual}});
      worst = std::max(worst, r.max_rescaled_residual);
      base = std::max(base, r.max_base_residual);
    }
  } catch (const NotASolution& e) {
    out["error"] = e.what();
    out["pass"] = false;
    return out;
  }
  out["max_base_residual"] = base;
  out["max_rescaled_residual"] = worst;
  out["pass"] = worst <= c.tol.covariance;
  return out;
}

json two_form(const Context& c) {
  const auto& [patch, rep, sol] = c.setup;
  const int n = patch.dim();
  const std::size_t m = c.points.size();
  std::vector<double> a0(m), amp(m), ap(m, 0.0), simple(m, 0.0), relation(m, 0.0);
  bool has_box = true;
  // random test forms drawn up front so that the result does not depend on threading
  std::mt19937_64 rng(c.cfg.seed ^ 0x2f0au);
  std::normal_distribution<double> gauss;
  std::vector<Mat> forms;
  for (std::size_t k = 0; k < m; ++k) {
    Mat b(n + 2, n + 2);
    for (int i = 0; i < n + 2; ++i)
      for (int j = 0; j < n + 2; ++j) b(i, j) = gauss(rng);
    forms.push_back(b - b.transpose());
  }
  std::vector<char> box_flags(m, 1);
  parallel_for(m, [&](std::size_t k) {
    const Vec& x = c.points[k];
    const TwoFormCrossCheck cc = cross_check_two_form(patch, rep, sol, x);
    a0[k] = cc.alpha_0;
    amp[k] = cc.alpha_mp;
    box_flags[k] = cc.has_box ? 1 : 0;
    if (cc.has_box) ap[k] = cc.alpha_plus;
    const TractorTwoForm tf = assemble_two_form(patch, rep, sol, x);
    if (tf.fiber().cwiseAbs().maxCoeff() > 0.0) simple[k] = wedge_and_simplicity(tf).simplicity_defect;
    const Twistor tw{sol.phi.value(x), Spinor(std::sqrt(2.0) / n * sol.dirac.value(x))};
    relation[k] = defining_relation_defect(rep, tw, forms[k]) / (1.0 + forms[k].norm() * tw.stacked().squaredNorm());
  });
  for (char f : box_flags) has_box &= f != 0;
  json out;
  out["points"] = m;
  out["max_alpha_0"] = max_of(a0);
  out["max_alpha_mp"] = max_of(amp);
  out["box_available"] = has_box;
  out["max_alpha_plus"] = has_box ? json(max_of(ap)) : json(nullptr);
  // simplicity is a property of solutions with a zero; x·S + T with T ≠ 0 has none in general
  const bool simplicity_expected = c.cfg.spinor_seed.kind != "position_clifford" ||
                                   c.cfg.spinor_seed.offset.size() == 0 || c.cfg.spinor_seed.offset.isZero(0.0);
  out["max_simplicity_defect"] = max_of(simple);
  out["simplicity_checked"] = simplicity_expected;
  out["max_relation_defect"] = max_of(relation);
  out["relation_normalization"] = 1.0;
  out["pass"] = max_of(a0) <= c.tol.two_form && max_of(amp) <= c.tol.two_form && max_of(ap) <= c.tol.two_form &&
                (!simplicity_expected || max_of(simple) <= c.tol.simplicity) && max_of(relation) <= c.tol.relation;
  c.series.push_back(point_series("two_form_alpha_0", c.points, a0, "alpha_0_defect"));
  return out;
}

json orbit(const Context& c) {
  const auto& [patch, rep, sol] = c.setup;
  const std::size_t m = c.points.size();
  std::vector<std::string> types(m);
  parallel_for(m, [&](std::size_t k) {
    try {
      types[k] = to_string(classify_orbit(assemble_two_form(patch, rep, sol, c.points[k]), kGramTol).factor_type);
    } catch (const DomainError&) {
      types[k] = "not_simple_or_zero";
    }
  });
  std::map<std::string, int> counts;
  for (const auto& t : types) ++counts[t];
  json out;
  out["points"] = m;
  out["counts"] = counts;
  const bool constant = counts.size() == 1;
  out["constant"] = constant;
  out["type"] = constant ? json(counts.begin()->first) : json("mixed");
  const Spinor d = sol.dirac.value(patch.domain().center());
  out["dirac_current_type"] = d.norm() == 0.0 ? "zero" : to_string(causal_type(current_vector(rep, d)));
  out["pass"] = constant && !counts.count("not_simple_or_zero");
  return out;
}

json zero_set(const Context& c) {
  const auto& [patch, rep, sol] = c.setup;
  ZeroSearchConfig zs = c.cfg.zero_search;
  zs.angle_tol = c.tol.angle;
  zs.seed ^= c.cfg.seed;
  const ZeroSetReport r = classify_zero_set(patch, rep, sol, zs);
  json out = r.to_json();
  bool ok = r.kind != ZeroSetKind::undetermined && r.max_nabla_v <= c.tol.nabla_v;
  if (r.kind == ZeroSetKind::isolated_points) ok &= r.cone_all_null && r.max_cone_angle <= c.tol.angle;
  out["pass"] = ok;
  if (!r.cone_samples.empty()) {
    Series cone;
    cone.name = "cone_samples";
    cone.header = {"direction", "t"};
    const int n = patch.dim();
    for (int i = 0; i < n; ++i) cone.header.push_back("x" + std::to_string(i));
    cone.header.insert(cone.header.end(), {"radius", "v_norm2", "phi_norm2", "angle"});
    const Vec p0 = r.points.empty() ? Vec::Zero(n) : r.points.front();
    for (const auto& s : r.cone_samples) {
      std::vector<double> row{static_cast<double>(s.direction), s.t};
      row.insert(row.end(), s.x.data(), s.x.data() + n);
      row.insert(row.end(), {(s.x - p0).norm(), s.v_norm2, s.phi_norm2, s.angle});
      cone.rows.push_back(std::move(row));
    }
    c.series.push_back(std::move(cone));
  }
  return out;
}

}  // namespace

const char* to_string(Campaign c) {
  for (const auto& [name, value] : campaign_names())
    if (value == c) return name.c_str();
  return "unknown";
}

std::vector<Campaign> all_campaigns() {
  return {Campaign::verify_twistor, Campaign::covariance, Campaign::two_form, Campaign::orbit, Campaign::zero_set};
}

Tolerances Tolerances::scaled(double f) const {
  Tolerances t = *this;
  for (double* v : {&t.twistor, &t.covariance, &t.pair, &t.integrability, &t.two_form, &t.simplicity, &t.relation,
                    &t.angle, &t.nabla_v})
    *v *= f;
  return t;
}

json Tolerances::to_json() const {
  return {{"twistor", twistor},   {"covariance", covariance}, {"pair", pair},
          {"integrability", integrability}, {"two_form", two_form}, {"simplicity", simplicity},
          {"relation", relation}, {"angle", angle},           {"nabla_v", nabla_v}};
}

Tolerances Tolerances::from_json(const json& j) {
  Tolerances t;
  require_keys(j, {"twistor", "covariance", "pair", "integrability", "two_form", "simplicity", "relation", "angle",
                   "nabla_v"},
               "sampling.tolerances");
  try {
    t.twistor = j.value("twistor", t.twistor);
    t.covariance = j.value("covariance", t.covariance);
    t.pair = j.value("pair", t.pair);
    t.integrability = j.value("integrability", t.integrability);
    t.two_form = j.value("two_form", t.two_form);
    t.simplicity = j.value("simplicity", t.simplicity);
    t.relation = j.value("relation", t.relation);
    t.angle = j.value("angle", t.angle);
    t.nabla_v = j.value("nabla_v", t.nabla_v);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed tolerances: ") + e.what());
  }
  for (double v : {t.twistor, t.covariance, t.pair, t.integrability, t.two_form, t.simplicity, t.relation, t.angle,
                   t.nabla_v})
    if (!(v > 0.0)) throw ConfigError("tolerances must be positive");
  return t;
}

RunConfig RunConfig::from_json(const json& j) {
  require_keys(j, {"family", "spinor_seed", "rescale", "campaign", "sampling", "zero_search"}, "config");
  RunConfig c;
  try {
    if (!j.contains("family") || !j["family"].is_object()) throw ConfigError("config.family must be an object");
    c.family = j["family"];
    if (!c.family.contains("dim") || !c.family["dim"].is_number_integer())
      throw ConfigError("family.dim must be an integer");
    const int n = c.family["dim"].get<int>();
    if (n < 3 || n > 6) throw ConfigError("family.dim must lie in [3, 6]");
    const int d = 1 << (n / 2);

    if (!j.contains("spinor_seed")) throw ConfigError("config.spinor_seed is required");
    const json& s = j["spinor_seed"];
    require_keys(s, {"kind", "components", "offset", "null_projection"}, "spinor_seed");
    c.spinor_seed.kind = s.at("kind").get<std::string>();
    if (c.spinor_seed.kind != "constant" && c.spinor_seed.kind != "position_clifford" &&
        c.spinor_seed.kind != "null_kernel")
      throw ConfigError("spinor_seed.kind must be constant, position_clifford or null_kernel");
    c.spinor_seed.components = spinor_from_json(s.at("components"), "spinor_seed.components");
    if (c.spinor_seed.components.size() != d)
      throw ConfigError("spinor_seed.components must have " + std::to_string(d) + " entries");
    if (s.contains("offset")) {
      c.spinor_seed.offset = spinor_from_json(s["offset"], "spinor_seed.offset");
      if (c.spinor_seed.offset.size() != d) throw ConfigError("spinor_seed.offset length mismatch");
    }
    c.spinor_seed.null_projection = s.value("null_projection", false);

    if (j.contains("rescale") && !j["rescale"].is_null()) c.rescale = j["rescale"];

    if (j.contains("campaign")) {
      const json& cj = j["campaign"];
      if (cj.is_object()) {
        std::set<std::string> keys;
        for (const auto& [k, v] : campaign_names()) keys.insert(k);
        require_keys(cj, keys, "campaign");
        for (const auto& [name, value] : campaign_names())
          if (cj.value(name, false)) c.campaigns.push_back(value);
      } else if (cj.is_string() || cj.is_array()) {
        for (const auto& name : cj.is_string() ? json::array({cj}) : cj) {
          const auto it = campaign_names().find(name.get<std::string>());
          if (it == campaign_names().end()) throw ConfigError("unknown campaign '" + name.get<std::string>() + "'");
          if (std::find(c.campaigns.begin(), c.campaigns.end(), it->second) == c.campaigns.end())
            c.campaigns.push_back(it->second);
        }
      } else {
        throw ConfigError("campaign must be a name, a list of names or an object of booleans");
      }
      if (c.campaigns.empty()) throw ConfigError("no campaign selected");
    } else {
      c.campaigns = all_campaigns();
    }
    std::sort(c.campaigns.begin(), c.campaigns.end());

    if (j.contains("sampling")) {
      const json& sj = j["sampling"];
      require_keys(sj, {"points", "seed", "tolerances"}, "sampling");
      c.points = sj.value("points", c.points);
      c.seed = sj.value("seed", c.seed);
      if (sj.contains("tolerances")) c.tol = Tolerances::from_json(sj["tolerances"]);
    }
    if (c.points < 1 || c.points > 100000) throw ConfigError("sampling.points must lie in [1, 100000]");
    if (j.contains("zero_search")) c.zero_search = ZeroSearchConfig::from_json(j["zero_search"]);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return c;
}

json RunConfig::to_json() const {
  json campaign = json::object();
  for (const auto& [name, value] : campaign_names())
    campaign[name] = std::find(campaigns.begin(), campaigns.end(), value) != campaigns.end();
  json seed_json{{"kind", spinor_seed.kind},
                 {"components", spinor_to_json(spinor_seed.components)},
                 {"null_projection", spinor_seed.null_projection}};
  if (spinor_seed.offset.size() > 0) seed_json["offset"] = spinor_to_json(spinor_seed.offset);
  return {{"family", family},
          {"spinor_seed", seed_json},
          {"rescale", rescale},
          {"campaign", campaign},
          {"sampling", {{"points", points}, {"seed", seed}, {"tolerances", tol.to_json()}}},
          {"zero_search", zero_search.to_json()}};
}

Setup build_setup(const RunConfig& cfg) {
  try {
    const MetricPatch base = patch_from_json(cfg.family);
    const int n = base.dim();
    CliffordRep rep = build_clifford_rep(Signature::lorentzian(n));
    const auto& seed = cfg.spinor_seed;
    Spinor s = seed.components;
    if (seed.null_projection || seed.kind == "null_kernel") s = null_kernel_spinor(rep, s) / std::sqrt(2.0);
    KnownSolution sol;
    if (seed.kind == "position_clifford") {
      const Spinor t = seed.offset.size() > 0 ? seed.offset : Spinor(Spinor::Zero(s.size()));
      sol = flat_solution(base, rep, s, t);
    } else {
      sol = parallel_solution(base, rep, s);
    }
    if (cfg.rescale.is_null()) return {base, rep, sol};
    const RescaleFunction f = RescaleFunction::from_json(cfg.rescale, n);
    if (!base.constant_frame()) throw ConfigError("rescaled runs need a family with a constant frame");
    const MetricPatch q = rescale(base, f);
    return {q, rep, rescaled_solution(base, q, rep, sol, f)};
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  } catch (const DimensionMismatch& e) {
    throw ConfigError(e.what());
  }
}

CampaignReport run(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const Setup setup = build_setup(cfg);
  std::mt19937_64 rng(cfg.seed);
  const std::vector<Vec> points = sample_points(setup.patch.domain(), cfg.points, rng);
  CampaignReport report;
  const Context ctx{cfg, setup, points, cfg.tol, report.series};
  json checks = json::object();
  bool pass = true;
  for (Campaign c : cfg.campaigns) {
    json r;
    try {
      switch (c) {
        case Campaign::verify_twistor: r = verify_twistor(ctx); break;
        case Campaign::covariance: r = covariance(ctx); break;
        case Campaign::two_form: r = two_form(ctx); break;
        case Campaign::orbit: r = orbit(ctx); break;
        case Campaign::zero_set: r = zero_set(ctx); break;
      }
    } catch (const Error& e) {
      r = {{"error", e.what()}, {"pass", false}};
    }
    pass &= r.value("pass", false);
    checks[to_string(c)] = std::move(r);
  }
  report.pass = pass;
  report.body = {{"schema", kReportSchema},
                 {"toolkit_version", kToolkitVersion},
                 {"config", cfg.to_json()},
                 {"checks", checks},
                 {"pass", pass},
                 {"wall_time_s", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
  return report;
}

std::string report_text(const CampaignReport& report) { return report.body.dump(2) + "\n"; }

std::vector<std::filesystem::path> emit_plot_data(const CampaignReport& report, const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  for (const auto& s : report.series) {
    if (s.rows.empty()) continue;
    std::filesystem::create_directories(dir);
    const auto path = dir / (s.name + ".csv");
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path.string());
    for (std::size_t i = 0; i < s.header.size(); ++i) os << (i ? "," : "") << s.header[i];
    os << '\n';
    os.precision(17);
    for (const auto& row : s.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << '\n';
    }
    if (!os) throw Error("failed writing " + path.string());
    written.push_back(path);
  }
  return written;
}

}  // namespace spintractor
