#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "documents.hpp"
#include "run_report.hpp"
#include "symcat/enriched.hpp"
#include "symcat/equinet.hpp"
#include "symcat/error.hpp"
#include "symcat/fincat.hpp"
#include "symcat/optdyn.hpp"
#include "symcat/pinn.hpp"
#include "symcat/sobj.hpp"
#include "symcat/symgrp.hpp"
#include "symcat/topo.hpp"

namespace symcat::cli {
namespace {

// Raised after an eager validation failure: the report so far is emitted
// with status fail.
struct ValidationStop {};

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  bool json = false;
  bool timing = false;
  std::string report_path;
  std::size_t max_witnesses = 20;
};

class Ctx {
 public:
  Ctx(RunReport& rep, const Globals& g) : rep_(rep), g_(g) {}

  RunReport& report() { return rep_; }
  std::uint64_t seed() const { return rep_.seed; }
  double tol(double fallback) const { return g_.tol.value_or(fallback); }
  CheckOptions opts() const { return {g_.max_witnesses}; }

  Document load(const std::string& path, const std::string& kind) {
    auto doc = load_document(path);
    expect_kind(doc, kind);
    rep_.inputs.push_back({doc.path, doc.sha256});
    return doc;
  }

  /// Records a structural validation and stops the run if it failed.
  void gate(LawReport r) {
    r.finalize(opts());
    const bool ok = r.passed();
    rep_.findings.push_back(std::move(r));
    if (!ok) throw ValidationStop{};
  }

  void finding(LawReport r) {
    r.finalize(opts());
    rep_.findings.push_back(std::move(r));
  }

  json& data() { return rep_.data; }

 private:
  RunReport& rep_;
  const Globals& g_;
};

// Validators that signal by throwing become failing reports.
LawReport from_throwing(const std::string& name, const std::function<void()>& check) {
  LawReport r(name);
  r.add_case();
  try {
    check();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::MalformedDocument && e.kind() != ErrorKind::NonFinite) throw;
    r.violate(std::string(to_string(e.kind())), {}, e.what());
  }
  return r;
}

Vector parse_vector(const std::string& text, const std::string& flag) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorKind::UsageError, flag + ": cannot parse '" + item + "' as a number");
    }
  }
  require(!vals.empty(), ErrorKind::UsageError, flag + ": empty vector");
  return Eigen::Map<Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

json vector_json(const Vector& v) { return encode_vector(v); }

LawReport validate_diagram(const topo::PersistenceDiagram& d) {
  LawReport r("validate_diagram");
  for (const auto& b : d.bars) {
    r.add_case();
    const std::vector<std::string> w{std::to_string(b.dim), fmt_real(b.birth)};
    if (!std::isfinite(b.birth)) r.violate("finite_birth", w);
    if (std::isnan(b.death) || !(b.death >= b.birth)) r.violate("death_after_birth", w);
  }
  return r;
}

/// "affine:a,b1[,b2,...]" is x -> a x + b with a scalar b broadcast. Other
/// specs go to the enriched built-ins and need a representation.
optdyn::Map make_map(const std::string& spec, const symgrp::Representation* rep) {
  if (spec.rfind("affine:", 0) == 0) {
    const Vector p = parse_vector(spec.substr(7), "--map");
    require(p.size() >= 2, ErrorKind::UsageError, "--map affine needs a scale and an offset");
    const double a = p(0);
    const Vector b = p.tail(p.size() - 1);
    return [a, b](const Vector& x) -> Vector {
      if (b.size() == 1) return (a * x).array() + b(0);
      require(b.size() == x.size(), ErrorKind::DimensionMismatch, "affine offset length differs from the input");
      return a * x + b;
    };
  }
  require(rep != nullptr, ErrorKind::UsageError, "--map " + spec + " needs --rep");
  return enriched::builtin_map(spec, *rep);
}

equinet::OutputLoss make_output_loss(const std::string& name) {
  if (name == "sum") return [](const Vector& y) { return y.sum(); };
  if (name == "sumsq") return [](const Vector& y) { return y.squaredNorm(); };
  if (name == "first") return [](const Vector& y) { return y(0); };
  fail(ErrorKind::UsageError, "--loss must be sum, sumsq or first");
}

std::function<double(const Vector&)> make_target(const std::string& spec) {
  if (spec == "sum") return [](const Vector& x) { return x.sum(); };
  if (spec == "diff") return [](const Vector& x) { return x(0) - x(1); };
  if (spec == "sumsq") return [](const Vector& x) { return x.squaredNorm(); };
  if (spec == "max") return [](const Vector& x) { return x.maxCoeff(); };
  if (spec.rfind("const:", 0) == 0) {
    const double c = parse_vector(spec.substr(6), "--target")(0);
    return [c](const Vector&) { return c; };
  }
  fail(ErrorKind::UsageError, "--target must be sum, diff, sumsq, max or const:<c>");
}

json hom_sizes(const fincat::EndoCat& hyp) {
  json rows = json::array();
  for (const auto& row : hyp.homs) {
    json r = json::array();
    for (const auto& h : row) r.push_back(h.size());
    rows.push_back(r);
  }
  return rows;
}

// ---------------------------------------------------------------------------

struct Options {
  std::vector<std::string> docs;
  std::string category, functor, nat, from, to, cat_action;
  std::string enriched, map, law = "update";
  std::string loss, flow = "gradstep:0.1";
  std::size_t dim = 2, probes = 50, samples = 100, pairs = 1000, t_max = 16, max_iter = 1000, level = 2;
  std::string action, action_out, action_in, rep, rep_in, rep_out, model, target, x, theta0;
  std::vector<std::string> chain, hidden;
  std::string hidden_act = "tanh", mode = "orbit", emit_tying;
  double eps = 0.1, lo = -1.0, hi = 1.0, lr = 0.05;
  std::optional<double> max_error, threshold;
  std::size_t budget = 5000, grid = 21;
  std::string trajectory, filtration, reference, ph_loss, object, scores;
  std::optional<std::size_t> diagram_dim;
  // train-pinn
  std::string pde = "poisson1d", source = "cospi", symmetric = "both", arch = "2x16";
  std::size_t steps = 2000, collocation = 12, record_every = 100;
  double pinn_lr = 0.01, ua = -1.0, ub = -1.0, a = -1.0, b = 1.0, lambda = 1.0, max_loss = 1e-2;
};

using Handler = std::function<void(Ctx&, const Options&)>;

// --- fincat ------------------------------------------------------------------

fincat::FinCategory load_category(Ctx& c, const std::string& path) {
  const auto doc = c.load(path, "category");
  auto cat = decode_category(doc.payload);
  c.gate(fincat::validate_category(cat, c.opts()));
  return cat;
}

fincat::FunctorData load_functor(Ctx& c, const std::string& path, const fincat::FinCategory& cat) {
  const auto doc = c.load(path, "functor");
  auto f = decode_functor(doc.payload, cat, cat);
  return f;
}

void cmd_validate(Ctx& c, const Options& o) {
  require(!o.docs.empty(), ErrorKind::UsageError, "validate needs at least one document");
  for (const auto& path : o.docs) {
    const auto doc = load_document(path);
    c.report().inputs.push_back({doc.path, doc.sha256});
    const auto& k = doc.kind;
    const auto& p = doc.payload;
    auto need_category = [&]() {
      require(!o.category.empty(), ErrorKind::UsageError, k + " documents need --category");
      return load_category(c, o.category);
    };
    if (k == "category") {
      c.finding(fincat::validate_category(decode_category(p), c.opts()));
    } else if (k == "functor") {
      const auto cat = need_category();
      c.finding(fincat::check_functor(decode_functor(p, cat, cat), cat, cat, c.opts()));
    } else if (k == "nat") {
      const auto cat = need_category();
      require(!o.from.empty() && !o.to.empty(), ErrorKind::UsageError, "nat documents need --from and --to");
      const auto f = load_functor(c, o.from, cat), g = load_functor(c, o.to, cat);
      c.gate(fincat::check_functor(f, cat, cat, c.opts()));
      c.gate(fincat::check_functor(g, cat, cat, c.opts()));
      c.finding(fincat::check_natural(decode_nat(p, cat, cat), f, g, cat, cat, c.opts()));
    } else if (k == "cat_action") {
      const auto cat = need_category();
      c.finding(fincat::validate_cat_action(decode_cat_action(p, cat), cat, c.opts()));
    } else if (k == "group") {
      c.finding(symgrp::validate_group(*decode_group(p), c.opts()));
    } else if (k == "action") {
      const auto a = decode_action(p);
      c.gate(symgrp::validate_group(*a.group(), c.opts()));
      c.finding(symgrp::validate_action(a, c.opts()));
    } else if (k == "representation") {
      const auto r = decode_representation(p);
      c.gate(symgrp::validate_group(*r.group(), c.opts()));
      c.finding(symgrp::validate_representation(r, {}, c.opts()));
    } else if (k == "enriched_object") {
      c.finding(enriched::validate_enriched_object(decode_enriched_object(p), c.opts()));
    } else if (k == "model") {
      const auto m = decode_model(p);
      c.finding(from_throwing("validate_model", [&] { equinet::validate_model(m); }));
      c.data()["parameters"] = m.parameter_count();
    } else if (k == "tying") {
      const auto t = decode_tying(p);
      LawReport r("validate_tying");
      r.add_case();
      c.finding(r);
      c.data()["weight_orbits"] = t.weight_orbits();
      c.data()["bias_orbits"] = t.bias_orbits();
    } else if (k == "complex") {
      c.finding(topo::validate_complex(decode_complex(p), c.opts()));
    } else if (k == "filtration") {
      c.finding(topo::validate_filtration(decode_filtration(p), c.opts()));
    } else if (k == "diagram") {
      c.finding(validate_diagram(decode_diagram(p)));
    } else if (k == "simplicial_object") {
      c.finding(sobj::validate_simplicial(decode_simplicial(p), c.opts()));
    } else if (k == "trajectory") {
      const auto t = decode_trajectory(p);
      c.finding(from_throwing("validate_trajectory", [&] { optdyn::validate_trajectory(t); }));
    } else if (k == "report") {
      const auto r = run_report_from_json(p);
      LawReport v("validate_report");
      v.add_case();
      c.finding(v);
      (void)r;
    }
  }
}

void cmd_laws(Ctx& c, const Options& o) {
  bool any = false;
  if (!o.category.empty()) {
    any = true;
    const auto cat = load_category(c, o.category);
    std::optional<fincat::FunctorData> f, g;
    if (!o.functor.empty()) {
      f = load_functor(c, o.functor, cat);
      c.finding(fincat::check_functor(*f, cat, cat, c.opts()));
    }
    if (!o.nat.empty()) {
      require(!o.from.empty() && !o.to.empty(), ErrorKind::UsageError, "--nat needs --from and --to");
      const auto from = load_functor(c, o.from, cat), to = load_functor(c, o.to, cat);
      c.gate(fincat::check_functor(from, cat, cat, c.opts()));
      c.gate(fincat::check_functor(to, cat, cat, c.opts()));
      const auto doc = c.load(o.nat, "nat");
      c.finding(fincat::check_natural(decode_nat(doc.payload, cat, cat), from, to, cat, cat, c.opts()));
    }
    if (!o.cat_action.empty()) {
      const auto doc = c.load(o.cat_action, "cat_action");
      const auto act = decode_cat_action(doc.payload, cat);
      c.gate(fincat::validate_cat_action(act, cat, c.opts()));
      if (f) c.finding(fincat::check_equivariant_functor(*f, act, cat, c.opts()));
    }
  }
  if (!o.enriched.empty()) {
    any = true;
    require(!o.map.empty(), ErrorKind::UsageError, "--enriched needs --map");
    const auto doc = c.load(o.enriched, "enriched_object");
    const auto obj = decode_enriched_object(doc.payload);
    c.gate(enriched::validate_enriched_object(obj, c.opts()));
    require(obj.linear(), ErrorKind::UsageError, "--map checks need a linear carrier");
    const auto& r = std::get<symgrp::Representation>(obj.carrier);
    const auto u = enriched::builtin_map(o.map, r);
    const enriched::SampleOptions s{o.samples, c.seed()};
    const double tol = c.tol(Tolerances{}.alg);
    if (o.law == "update") {
      c.finding(enriched::check_update_invariance(u, r, s, tol, c.opts()));
    } else if (o.law == "reduction") {
      c.finding(enriched::check_reduction_optimality(u, r, s, tol, c.opts()));
    } else if (o.law == "regularizer") {
      auto rr = enriched::check_regularizer(u, r, s, tol, c.opts());
      c.finding(rr.commutation);
      c.finding(rr.projection);
    } else {
      fail(ErrorKind::UsageError, "--law must be update, reduction or regularizer");
    }
  }
  if (!o.loss.empty()) {
    any = true;
    const auto loss = optdyn::make_loss(o.loss);
    c.finding(optdyn::check_gradient(loss, {o.dim, o.probes, c.seed(), 1.0}, c.tol(1e-6)));
  }
  require(any, ErrorKind::UsageError, "laws needs --category, --enriched or --loss");
}

void cmd_hyp(Ctx& c, const Options& o) {
  require(!o.category.empty(), ErrorKind::UsageError, "hyp needs --category");
  const auto cat = load_category(c, o.category);
  const auto hyp = fincat::enumerate_hyp(cat);
  json functors = json::array();
  for (const auto& f : hyp.endofunctors) functors.push_back(encode_functor(f, cat, cat));
  c.data()["endofunctors"] = functors;
  c.data()["functor_count"] = hyp.endofunctors.size();
  c.data()["hom_sizes"] = hom_sizes(hyp);
  c.data()["transformation_count"] = hyp.transformation_count();
  c.finding(fincat::check_interchange(hyp, c.opts()));
}

void cmd_stability(Ctx& c, const Options& o) {
  require(!o.category.empty(), ErrorKind::UsageError, "stability needs --category");
  const auto cat = load_category(c, o.category);
  const auto hyp = fincat::enumerate_hyp(cat);
  if (!o.nat.empty()) {
    require(!o.functor.empty(), ErrorKind::UsageError, "--nat needs --functor");
    const auto f = load_functor(c, o.functor, cat);
    c.gate(fincat::check_functor(f, cat, cat, c.opts()));
    const auto doc = c.load(o.nat, "nat");
    c.finding(fincat::check_stability(decode_nat(doc.payload, cat, cat), f, hyp, c.opts()));
    return;
  }
  // Every endo-transformation; stable exactly when it is an identity.
  LawReport summary("stable_iff_identity");
  json cells = json::array();
  for (std::size_t i = 0; i < hyp.endofunctors.size(); ++i)
    for (std::size_t k = 0; k < hyp.homs[i][i].size(); ++k) {
      const auto& eta = hyp.homs[i][i][k];
      const bool stable = fincat::check_stability(eta, hyp.endofunctors[i], hyp).passed();
      const bool identity = eta == fincat::identity_transformation(hyp.endofunctors[i], cat, cat);
      summary.add_case();
      if (stable != identity)
        summary.violate("stable_iff_identity", {"F" + std::to_string(i), std::to_string(k)},
                        stable ? "stable but not the identity" : "identity but not stable");
      json comps = json::object();
      for (std::size_t a = 0; a < eta.components.size(); ++a)
        comps[cat.object_name(a)] = cat.morphism_name(eta.components[a]);
      cells.push_back({{"functor", i}, {"index", k}, {"components", comps}, {"stable", stable}, {"identity", identity}});
    }
  c.data()["cells"] = cells;
  c.finding(summary);
}

// --- symgrp ------------------------------------------------------------------

symgrp::SetAction load_action(Ctx& c, const std::string& path) {
  const auto doc = c.load(path, "action");
  auto a = decode_action(doc.payload);
  c.gate(symgrp::validate_group(*a.group(), c.opts()));
  c.gate(symgrp::validate_action(a, c.opts()));
  return a;
}

symgrp::Representation load_rep(Ctx& c, const std::string& path) {
  const auto doc = c.load(path, "representation");
  auto r = decode_representation(doc.payload);
  c.gate(symgrp::validate_group(*r.group(), c.opts()));
  c.gate(symgrp::validate_representation(r, {}, c.opts()));
  return r;
}

void cmd_orbits(Ctx& c, const Options& o) {
  require(!o.action.empty(), ErrorKind::UsageError, "orbits needs --action");
  const auto a = load_action(c, o.action);
  const auto part = symgrp::orbits(a);
  const auto count = symgrp::burnside(a);
  LawReport r("burnside");
  r.add_case();
  if (count != part.count())
    r.violate("burnside_equals_orbits", {}, std::to_string(count) + " vs " + std::to_string(part.count()));
  c.finding(r);
  c.data()["orbit_count"] = part.count();
  c.data()["burnside"] = count;
  c.data()["orbits"] = part.members;
}

void cmd_intertwiner(Ctx& c, const Options& o) {
  require(!o.rep_in.empty() && !o.rep_out.empty(), ErrorKind::UsageError, "intertwiner needs --rep-in and --rep-out");
  const auto ri = load_rep(c, o.rep_in), ro = load_rep(c, o.rep_out);
  require(symgrp::same_group(ri.group(), ro.group()), ErrorKind::GroupMismatch, "representations use different groups");
  const auto basis = symgrp::intertwiner_basis(ri, ro);
  const double tol = c.tol(1e-12);
  LawReport r("intertwiner_residual");
  json mats = json::array();
  for (std::size_t k = 0; k < basis.size(); ++k) {
    r.add_case();
    const double res = symgrp::intertwiner_residual(ri, ro, basis[k]);
    r.track_max("max_residual", res);
    if (res > tol) r.violate("equivariance", {std::to_string(k)}, "residual " + fmt_real(res));
    mats.push_back(encode_matrix(basis[k]));
  }
  if (basis.empty()) r.vacuous = true;
  c.finding(r);
  c.data()["dimension"] = basis.size();
  c.data()["basis"] = mats;
}

// --- equinet -----------------------------------------------------------------

equinet::DenseModel load_model(Ctx& c, const std::string& path) {
  const auto doc = c.load(path, "model");
  auto m = decode_model(doc.payload);
  c.gate(from_throwing("validate_model", [&] { equinet::validate_model(m); }));
  return m;
}

void cmd_equivariance(Ctx& c, const Options& o) {
  require(!o.model.empty() && !o.rep_in.empty() && !o.rep_out.empty(), ErrorKind::UsageError,
          "equivariance needs --model, --rep-in and --rep-out");
  const auto m = load_model(c, o.model);
  const auto ri = load_rep(c, o.rep_in), ro = load_rep(c, o.rep_out);
  auto res = equinet::check_model_equivariance(m, ri, ro, o.samples, c.seed(), c.tol(1e-9), c.opts());
  c.data()["max_violation"] = encode_real(res.max_violation);
  c.finding(res.report);
}

void cmd_compress(Ctx& c, const Options& o) {
  std::vector<symgrp::SetAction> actions;
  if (!o.chain.empty()) {
    for (const auto& p : o.chain) actions.push_back(load_action(c, p));
  } else {
    require(!o.action_out.empty() && !o.action_in.empty(), ErrorKind::UsageError,
            "compress needs --action-out and --action-in, or --chain");
    actions.push_back(load_action(c, o.action_in));
    actions.push_back(load_action(c, o.action_out));
  }
  require(actions.size() >= 2, ErrorKind::UsageError, "--chain needs at least two actions");
  const auto rep = equinet::compress_chain(actions);
  json layers = json::array();
  LawReport check("tied_equivariance");
  for (std::size_t l = 0; l + 1 < actions.size(); ++l) {
    const auto& a_in = actions[l];
    const auto& a_out = actions[l + 1];
    const auto comp = equinet::compress(a_out.size(), a_in.size(), a_out, a_in);
    const auto& lc = rep.layers[l];
    layers.push_back({{"raw_weights", lc.raw_weights},
                      {"raw_bias", lc.raw_bias},
                      {"tied_weights", lc.tied_weights},
                      {"tied_bias", lc.tied_bias},
                      {"weight_ratio", lc.weight_ratio},
                      {"best_case_ratio", lc.best_case_ratio}});
    // Any assignment of orbit parameters must give an intertwiner.
    std::vector<double> params(comp.tying.weight_orbits());
    for (std::size_t k = 0; k < params.size(); ++k) params[k] = 1.0 + static_cast<double>(k);
    const Matrix w = equinet::materialize_tying(comp.tying, params);
    const double res = symgrp::intertwiner_residual(symgrp::permutation_representation(a_in),
                                                    symgrp::permutation_representation(a_out), w);
    check.add_case();
    check.track_max("max_residual", res);
    if (res != 0.0) check.violate("tied_equivariance", {std::to_string(l)}, "residual " + fmt_real(res));
    if (l == 0 && !o.emit_tying.empty()) {
      std::ofstream out(o.emit_tying, std::ios::binary);
      require(static_cast<bool>(out), ErrorKind::UsageError, "cannot write " + o.emit_tying);
      out << canonical_dump(make_document("tying", encode_tying(comp.tying))) << "\n";
    }
  }
  c.data()["layers"] = layers;
  c.data()["raw_total"] = rep.raw_total;
  c.data()["tied_total"] = rep.tied_total;
  c.data()["ratio"] = rep.ratio;
  c.finding(check);
}

void cmd_fit_invariant(Ctx& c, const Options& o) {
  require(!o.rep_in.empty() && !o.target.empty(), ErrorKind::UsageError, "fit-invariant needs --rep-in and --target");
  const auto ri = load_rep(c, o.rep_in);
  std::vector<equinet::HiddenSpec> hidden;
  for (const auto& p : o.hidden) hidden.push_back({load_rep(c, p), equinet::parse_activation(o.hidden_act)});
  equinet::FitOptions fo;
  fo.budget = o.budget;
  fo.lr = o.lr;
  fo.grid_per_axis = o.grid;
  fo.seed = c.seed();
  const auto res = equinet::fit_invariant(make_target(o.target), ri, hidden, fo);
  LawReport r("fit_invariant");
  r.add_case();
  r.metrics["sup_error"] = res.sup_error;
  r.metrics["final_loss"] = res.final_loss;
  if (!std::isfinite(res.sup_error)) r.violate("finite", {}, "sup error is not finite");
  if (o.max_error && !(res.sup_error <= *o.max_error))
    r.violate("max_error", {}, fmt_real(res.sup_error) + " > " + fmt_real(*o.max_error));
  if (res.budget_exhausted) r.note("step budget exhausted before the gradient vanished");
  c.finding(r);
  c.data()["sup_error"] = encode_real(res.sup_error);
  c.data()["steps"] = res.steps;
  c.data()["parameters"] = res.parameters;
  c.data()["budget_exhausted"] = res.budget_exhausted;
  c.data()["model"] = encode_model(res.model);
}

void cmd_adversarial(Ctx& c, const Options& o) {
  require(!o.model.empty() && !o.rep_in.empty() && !o.x.empty(), ErrorKind::UsageError,
          "adversarial needs --model, --rep-in and --x");
  const auto m = load_model(c, o.model);
  const auto ri = load_rep(c, o.rep_in);
  equinet::AdversarialOptions ao;
  require(o.mode == "orbit" || o.mode == "fixed", ErrorKind::UsageError, "--mode must be orbit or fixed");
  ao.mode = o.mode == "orbit" ? equinet::AdversarialMode::orbit : equinet::AdversarialMode::fixed;
  ao.eps = o.eps;
  ao.samples = o.samples;
  ao.seed = c.seed();
  ao.tol = c.tol(1e-12);
  auto r = equinet::adversarial_invariance(m, make_output_loss(o.loss.empty() ? "sum" : o.loss),
                                           parse_vector(o.x, "--x"), ri, ao);
  c.data()["max_delta_loss"] = encode_real(r.metrics.count("max_delta_loss") ? r.metrics.at("max_delta_loss") : 0.0);
  c.finding(r);
}

// --- optdyn ------------------------------------------------------------------

std::optional<symgrp::Representation> maybe_rep(Ctx& c, const std::string& path) {
  if (path.empty()) return std::nullopt;
  return load_rep(c, path);
}

optdyn::Map resolve_map(const Options& o, const symgrp::Representation* rep) {
  require(!o.map.empty() || !o.loss.empty(), ErrorKind::UsageError, "needs --map or --loss with --flow");
  if (!o.map.empty()) return make_map(o.map, rep);
  const auto flow = optdyn::make_flow(o.flow, optdyn::make_loss(o.loss));
  return flow.step;
}

void cmd_contract(Ctx& c, const Options& o) {
  const auto rep = maybe_rep(c, o.rep);
  const auto f = resolve_map(o, rep ? &*rep : nullptr);
  const optdyn::BoxSampler sampler{rep ? rep->dim() : o.dim, o.lo, o.hi};
  const auto cert = optdyn::estimate_contraction(f, sampler, o.pairs, c.seed(), rep ? &*rep : nullptr);
  LawReport r("contraction");
  r.add_case(cert.pairs);
  r.metrics["max_ratio"] = cert.max_ratio;
  if (!cert.contraction()) r.violate("ratio_below_one", {cert.sampler}, "max ratio " + fmt_real(cert.max_ratio));
  if (cert.degenerate_skipped) r.note(std::to_string(cert.degenerate_skipped) + " degenerate pairs skipped");
  c.finding(r);
  c.data()["max_ratio"] = encode_real(cert.max_ratio);
  c.data()["pairs"] = cert.pairs;
  c.data()["sampler"] = cert.sampler;
}

void cmd_iterate(Ctx& c, const Options& o) {
  require(!o.theta0.empty(), ErrorKind::UsageError, "iterate needs --theta0");
  const auto rep = maybe_rep(c, o.rep);
  const auto f = resolve_map(o, rep ? &*rep : nullptr);
  LawReport r("banach_iterate");
  r.add_case();
  try {
    const auto res = optdyn::banach_iterate(f, parse_vector(o.theta0, "--theta0"), c.tol(1e-12), o.max_iter);
    r.metrics["residual"] = res.residual;
    r.metrics["post_residual"] = res.post_residual;
    c.data()["theta"] = vector_json(res.theta);
    c.data()["iterations"] = res.iterations;
  } catch (const optdyn::NonConvergenceError& e) {
    r.violate("converged", {}, e.what());
    c.data()["theta"] = vector_json(e.last());
    c.data()["iterations"] = e.residuals().size();
  }
  c.finding(r);
}

void cmd_flow(Ctx& c, const Options& o) {
  require(!o.loss.empty() && !o.rep.empty(), ErrorKind::UsageError, "flow needs --loss and --rep");
  const auto rep = load_rep(c, o.rep);
  const auto flow = optdyn::make_flow(o.flow, optdyn::make_loss(o.loss));
  c.finding(optdyn::check_semigroup(flow, optdyn::random_semigroup_cases(rep.dim(), o.t_max, o.samples, c.seed()), c.opts()));
  c.finding(optdyn::check_flow_equivariance(flow, rep, o.t_max, o.samples, c.seed(), c.tol(1e-9), c.opts()));
}

void cmd_converge(Ctx& c, const Options& o) {
  require(!o.trajectory.empty(), ErrorKind::UsageError, "converge needs --trajectory");
  const auto doc = c.load(o.trajectory, "trajectory");
  const auto traj = decode_trajectory(doc.payload);
  c.gate(from_throwing("validate_trajectory", [&] { optdyn::validate_trajectory(traj); }));
  const auto rep = maybe_rep(c, o.rep);
  const auto t = optdyn::detect_convergence(traj, o.eps, rep ? &*rep : nullptr);
  LawReport r("detect_convergence");
  r.add_case(traj.size());
  if (!t) r.note("no recorded time satisfies the criterion");
  c.finding(r);
  c.data()["converged_at"] = t ? json(*t) : json(nullptr);
  c.data()["eps"] = o.eps;
}

void cmd_meta(Ctx& c, const Options& o) {
  require(!o.map.empty() && !o.rep.empty() && !o.theta0.empty(), ErrorKind::UsageError,
          "meta needs --map, --rep and --theta0");
  const auto rep = load_rep(c, o.rep);
  const auto phi = make_map(o.map, &rep);
  std::optional<optdyn::MetaResult> maybe;
  try {
    maybe = optdyn::meta_fixed_point(phi, rep, parse_vector(o.theta0, "--theta0"), c.tol(1e-12), o.max_iter, c.seed());
  } catch (const optdyn::NonConvergenceError& e) {
    LawReport r("meta_fixed_point");
    r.add_case();
    r.violate("converged", {}, e.what());
    c.finding(r);
    c.data()["theta"] = vector_json(e.last());
    return;
  }
  const auto& res = *maybe;
  c.finding(res.hypothesis);
  c.finding(res.invariance);
  c.data()["theta"] = vector_json(res.theta);
  c.data()["defect"] = encode_real(res.defect);
  c.data()["iterations"] = res.iteration.iterations;
}

// --- pinn --------------------------------------------------------------------

json train_json(const pinn::TrainReport& t, std::size_t every) {
  json curve = json::array(), defect = json::array();
  for (std::size_t i = 0; i < t.loss_curve.size(); ++i)
    if (i % every == 0 || i + 1 == t.loss_curve.size()) curve.push_back({{"step", i}, {"loss", encode_real(t.loss_curve[i])}});
  for (std::size_t i = 0; i < t.defect_curve.size(); ++i)
    if (i % every == 0 || i + 1 == t.defect_curve.size()) defect.push_back({{"step", i}, {"defect", encode_real(t.defect_curve[i])}});
  json thresholds = json::object();
  for (const auto& [th, s] : t.steps_to_threshold) thresholds[fmt_real(th)] = s ? json(*s) : json(nullptr);
  return {{"symmetrized", t.symmetrized}, {"steps", t.steps},
          {"final_loss", encode_real(t.final_loss)}, {"final_residual", encode_real(t.final_residual)},
          {"boundary_error", encode_real(t.boundary_error)}, {"max_defect", encode_real(t.max_defect)},
          {"aborted", t.aborted}, {"steps_to_threshold", thresholds}, {"loss_curve", curve}, {"defect_curve", defect}};
}

LawReport train_findings(const pinn::TrainReport& t, double max_loss) {
  LawReport r(t.symmetrized ? "train_pinn[symmetrized]" : "train_pinn[baseline]");
  r.add_case();
  r.metrics["final_loss"] = t.final_loss;
  r.metrics["max_defect"] = t.max_defect;
  if (t.aborted) r.violate("finite_loss", {}, "training aborted on a non-finite loss");
  if (!(t.final_loss < max_loss)) r.violate("residual_loss", {}, fmt_real(t.final_loss) + " >= " + fmt_real(max_loss));
  if (t.symmetrized) {
    r.add_case(t.defect_curve.size());
    if (!(t.max_defect <= 1e-12)) r.violate("invariance_defect", {}, fmt_real(t.max_defect));
  }
  return r;
}

void cmd_train_pinn(Ctx& c, const Options& o) {
  pinn::PdeSpec spec;
  spec.equation = o.pde;
  spec.source = o.source;
  spec.a = o.a;
  spec.b = o.b;
  spec.ua = o.ua;
  spec.ub = o.ub;
  spec.collocation = o.collocation;
  spec.lambda = o.lambda;
  try {
    pinn::validate_spec(spec);
  } catch (const Error& e) {
    fail(ErrorKind::UsageError, e.what());
  }
  const auto arch = pinn::parse_arch(o.arch);
  pinn::TrainOptions to;
  to.steps = o.steps;
  to.lr = o.pinn_lr;
  to.seed = c.seed();
  const std::size_t every = std::max<std::size_t>(1, o.record_every);
  if (o.symmetric == "both") {
    const auto cmp = pinn::train_compare(spec, arch, to);
    c.finding(train_findings(cmp.baseline, o.max_loss));
    c.finding(train_findings(cmp.symmetrized, o.max_loss));
    c.data()["baseline"] = train_json(cmp.baseline, every);
    c.data()["symmetrized"] = train_json(cmp.symmetrized, every);
    c.data()["warnings"] = cmp.warnings;
  } else {
    require(o.symmetric == "on" || o.symmetric == "off", ErrorKind::UsageError, "--symmetric must be on, off or both");
    const auto t = pinn::train(spec, arch, o.symmetric == "on", to);
    c.finding(train_findings(t, o.max_loss));
    c.data()[o.symmetric == "on" ? "symmetrized" : "baseline"] = train_json(t, every);
  }
  c.data()["arch"] = o.arch;
  c.data()["lr"] = o.pinn_lr;
  c.data()["steps"] = o.steps;
}

// --- topo --------------------------------------------------------------------

topo::Filtration load_filtration(Ctx& c, const std::string& path) {
  const auto doc = c.load(path, "filtration");
  auto f = decode_filtration(doc.payload);
  c.gate(topo::validate_filtration(f, c.opts()));
  return f;
}

topo::PersistenceDiagram load_diagram(Ctx& c, const std::string& path) {
  const auto doc = c.load(path, "diagram");
  auto d = decode_diagram(doc.payload);
  c.gate(validate_diagram(d));
  return d;
}

void cmd_persistence(Ctx& c, const Options& o) {
  require(!o.filtration.empty(), ErrorKind::UsageError, "persistence needs --filtration");
  const auto f = load_filtration(c, o.filtration);
  const auto d = topo::persistence(f);
  c.data()["diagram"] = encode_diagram(d);
  c.data()["total_persistence"] = topo::ph_loss(d, topo::PhLossMode::total_persistence);
}

void cmd_bottleneck(Ctx& c, const Options& o) {
  require(o.docs.size() == 2, ErrorKind::UsageError, "bottleneck needs two diagram documents");
  const auto a = load_diagram(c, o.docs[0]), b = load_diagram(c, o.docs[1]);
  std::set<std::size_t> dims;
  if (o.diagram_dim) {
    dims.insert(*o.diagram_dim);
  } else {
    for (const auto& x : a.bars) dims.insert(x.dim);
    for (const auto& x : b.bars) dims.insert(x.dim);
    if (dims.empty()) dims.insert(0);
  }
  json out = json::object();
  for (auto k : dims) {
    const auto r = topo::bottleneck(a, b, k);
    out[std::to_string(k)] = {{"distance", encode_real(r.distance)}, {"infinite_mismatch", r.infinite_mismatch}};
  }
  c.data()["bottleneck"] = out;
}

topo::ComplexAction complex_action(const symgrp::SetAction& a) {
  return {a.group(), a.table()};
}

void cmd_ph_check(Ctx& c, const Options& o) {
  require(!o.filtration.empty() && !o.action.empty(), ErrorKind::UsageError, "ph-check needs --filtration and --action");
  const auto f = load_filtration(c, o.filtration);
  const auto act = complex_action(load_action(c, o.action));
  c.gate(topo::validate_complex_action(act, f.complex, c.opts()));
  c.finding(topo::check_equivariant_filtration(act, f, c.opts()));
  c.finding(topo::diagram_invariance(act, f, c.opts()));
  const auto d = topo::persistence(f);
  c.data()["diagram"] = encode_diagram(d);
  if (o.ph_loss == "total" || o.ph_loss.empty()) {
    c.data()["ph_loss"] = {{"mode", "total_persistence"}, {"value", topo::ph_loss(d, topo::PhLossMode::total_persistence)}};
  } else if (o.ph_loss == "bottleneck") {
    require(!o.reference.empty(), ErrorKind::UsageError, "--ph-loss bottleneck needs --reference");
    const auto ref = load_diagram(c, o.reference);
    c.data()["ph_loss"] = {{"mode", "bottleneck_to"},
                           {"value", encode_real(topo::ph_loss(d, topo::PhLossMode::bottleneck_to, &ref))}};
  } else {
    fail(ErrorKind::UsageError, "--ph-loss must be total or bottleneck");
  }
}

// --- sobj --------------------------------------------------------------------

void cmd_simplicial(Ctx& c, const Options& o) {
  sobj::SimplicialObjectData m;
  std::optional<fincat::FinCategory> cat;
  if (!o.category.empty()) cat = load_category(c, o.category);
  if (!o.object.empty()) {
    const auto doc = c.load(o.object, "simplicial_object");
    m = decode_simplicial(doc.payload);
  } else {
    require(cat.has_value(), ErrorKind::UsageError, "simplicial needs --object or --category");
    m = sobj::nerve(*cat, o.level);
  }
  c.gate(sobj::validate_simplicial(m, c.opts()));
  if (!o.functor.empty()) {
    require(cat.has_value() && o.object.empty(), ErrorKind::UsageError,
            "--functor applies to the nerve of --category (omit --object)");
    const auto f = load_functor(c, o.functor, *cat);
    c.gate(fincat::check_functor(f, *cat, *cat, c.opts()));
    c.finding(sobj::check_simplicial_invariance(sobj::nerve_map(*cat, f, o.level), m, c.opts()));
  } else {
    c.finding(sobj::check_simplicial_invariance(sobj::identity_family(m), m, c.opts()));
  }
  c.data()["level_sizes"] = m.level_sizes;
  if (!o.scores.empty()) {
    require(o.threshold.has_value(), ErrorKind::UsageError, "--scores needs --threshold");
    const Vector s = parse_vector(o.scores, "--scores");
    const auto k = sobj::adapt_level(m, std::vector<double>(s.data(), s.data() + s.size()), *o.threshold);
    c.data()["adapt_level"] = k ? json(*k) : json(nullptr);
  }
}

// --- report ------------------------------------------------------------------

void cmd_report(Ctx& c, const Options& o) {
  require(!o.docs.empty(), ErrorKind::UsageError, "report needs at least one report document");
  json summary = json::array();
  for (const auto& path : o.docs) {
    const auto doc = c.load(path, "report");
    const auto r = run_report_from_json(doc.payload);
    for (auto f : r.findings) {
      f.check = r.subcommand + "/" + f.check;
      c.finding(f);
    }
    summary.push_back({{"path", path}, {"subcommand", r.subcommand}, {"status", r.status()}});
    if (r.error) {
      LawReport e(r.subcommand + "/error");
      e.add_case();
      e.violate("error", {path}, *r.error);
      c.finding(e);
    }
  }
  c.data()["reports"] = summary;
}

struct Command {
  const char* name;
  const char* help;
  Handler handler;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Globals g;
  Options o;
  CLI::App app{"Law checkers for finite categories, group actions, equivariant models and persistence"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--seed", g.seed, "random seed (default: $SYMCAT_SEED, else 0)");
  app.add_option("--tol", g.tol, "tolerance override for the selected check");
  app.add_flag("--json", g.json, "print the canonical JSON report");
  app.add_flag("--timing", g.timing, "include wall time in the report (breaks byte stability)");
  app.add_option("--report", g.report_path, "also write the JSON report to this path");
  app.add_option("--max-witnesses", g.max_witnesses, "cap on listed violations per check");

  const std::vector<Command> commands{
      {"validate", "structural validation of documents", cmd_validate},
      {"laws", "category, functor, naturality, enriched-map and gradient laws", cmd_laws},
      {"hyp", "enumerate endofunctors and transformations", cmd_hyp},
      {"stability", "stability of endo-transformations", cmd_stability},
      {"orbits", "orbits and Burnside count of a set action", cmd_orbits},
      {"intertwiner", "intertwiner basis between two representations", cmd_intertwiner},
      {"equivariance", "sampled equivariance of a dense model", cmd_equivariance},
      {"compress", "weight tying from set actions", cmd_compress},
      {"fit-invariant", "fit an invariant model to a target", cmd_fit_invariant},
      {"adversarial", "loss change along group orbits or fixed directions", cmd_adversarial},
      {"contract", "sampled Lipschitz ratio of a map", cmd_contract},
      {"iterate", "fixed-point iteration", cmd_iterate},
      {"flow", "semigroup and equivariance laws of a gradient flow", cmd_flow},
      {"converge", "convergence time of a recorded trajectory", cmd_converge},
      {"meta", "invariant fixed point of a meta-update", cmd_meta},
      {"train-pinn", "train baseline and symmetrized PINNs", cmd_train_pinn},
      {"persistence", "persistence diagram of a filtration", cmd_persistence},
      {"bottleneck", "bottleneck distance between two diagrams", cmd_bottleneck},
      {"ph-check", "equivariant filtration and diagram invariance", cmd_ph_check},
      {"simplicial", "simplicial identities and level-wise invariance", cmd_simplicial},
      {"report", "merge and re-emit saved reports", cmd_report},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& cmd : commands) {
    auto* s = app.add_subcommand(cmd.name, cmd.help);
    subs[cmd.name] = s;
    const std::string n = cmd.name;
    if (n == "validate" || n == "report" || n == "bottleneck") s->add_option("docs", o.docs, "document paths");
    if (n == "validate" || n == "laws" || n == "hyp" || n == "stability" || n == "simplicial")
      s->add_option("--category", o.category, "category document");
    if (n == "validate" || n == "laws") {
      s->add_option("--from", o.from, "source functor of a transformation");
      s->add_option("--to", o.to, "target functor of a transformation");
    }
    if (n == "laws" || n == "stability" || n == "simplicial") s->add_option("--functor", o.functor, "functor document");
    if (n == "laws" || n == "stability") s->add_option("--nat", o.nat, "transformation document");
    if (n == "laws") {
      s->add_option("--cat-action", o.cat_action, "group action on the category");
      s->add_option("--enriched", o.enriched, "enriched object document");
      s->add_option("--law", o.law, "update, reduction or regularizer");
      s->add_option("--probes", o.probes, "gradient probes");
    }
    if (n == "laws" || n == "contract" || n == "iterate" || n == "meta") s->add_option("--map", o.map, "map spec");
    if (n == "laws" || n == "contract" || n == "iterate" || n == "flow" || n == "adversarial")
      s->add_option("--loss", o.loss, "loss spec");
    if (n == "laws" || n == "contract") s->add_option("--dim", o.dim, "dimension");
    if (n == "contract" || n == "iterate" || n == "flow") s->add_option("--flow", o.flow, "flow spec, gradstep[:eta]");
    if (n == "orbits" || n == "ph-check") s->add_option("--action", o.action, "set action document");
    if (n == "compress") {
      s->add_option("--action-out", o.action_out, "action on output indices");
      s->add_option("--action-in", o.action_in, "action on input indices");
      s->add_option("--chain", o.chain, "actions on successive layers, input first");
      s->add_option("--emit-tying", o.emit_tying, "write the first layer's tying pattern here");
    }
    if (n == "intertwiner" || n == "equivariance" || n == "fit-invariant" || n == "adversarial")
      s->add_option("--rep-in", o.rep_in, "input representation");
    if (n == "intertwiner" || n == "equivariance") s->add_option("--rep-out", o.rep_out, "output representation");
    if (n == "equivariance" || n == "adversarial") s->add_option("--model", o.model, "model document");
    if (n == "laws" || n == "equivariance" || n == "adversarial" || n == "flow")
      s->add_option("--samples", o.samples, "number of samples");
    if (n == "fit-invariant") {
      s->add_option("--target", o.target, "sum, diff, sumsq, max or const:<c>");
      s->add_option("--hidden", o.hidden, "hidden-layer representation documents");
      s->add_option("--hidden-act", o.hidden_act, "hidden activation");
      s->add_option("--budget", o.budget, "gradient steps");
      s->add_option("--lr", o.lr, "learning rate");
      s->add_option("--grid", o.grid, "grid points per axis");
      s->add_option("--max-error", o.max_error, "fail when the sup error exceeds this");
    }
    if (n == "adversarial") {
      s->add_option("--x", o.x, "input point, comma separated");
      s->add_option("--mode", o.mode, "orbit or fixed");
      s->add_option("--eps", o.eps, "perturbation size in fixed mode");
    }
    if (n == "contract" || n == "iterate" || n == "converge" || n == "meta" || n == "flow")
      s->add_option("--rep", o.rep, "representation document");
    if (n == "contract") {
      s->add_option("--lo", o.lo, "sampling box lower bound");
      s->add_option("--hi", o.hi, "sampling box upper bound");
      s->add_option("--pairs", o.pairs, "sampled pairs");
    }
    if (n == "iterate" || n == "meta") {
      s->add_option("--theta0", o.theta0, "start point, comma separated");
      s->add_option("--max-iter", o.max_iter, "iteration cap");
    }
    if (n == "flow") s->add_option("--t-max", o.t_max, "largest flow time");
    if (n == "converge") {
      s->add_option("--trajectory", o.trajectory, "trajectory document");
      s->add_option("--eps", o.eps, "convergence radius");
    }
    if (n == "train-pinn") {
      s->add_option("--pde", o.pde, "equation id");
      s->add_option("--source", o.source, "cospi, zero or one");
      s->add_option("--symmetric", o.symmetric, "on, off or both");
      s->add_option("--steps", o.steps, "gradient steps");
      s->add_option("--arch", o.arch, "hidden layers x width, e.g. 2x16");
      s->add_option("--lr", o.pinn_lr, "learning rate");
      s->add_option("--a", o.a, "left end of the domain");
      s->add_option("--b", o.b, "right end of the domain");
      s->add_option("--ua", o.ua, "boundary value at a");
      s->add_option("--ub", o.ub, "boundary value at b");
      s->add_option("--collocation", o.collocation, "collocation points");
      s->add_option("--lambda", o.lambda, "boundary weight");
      s->add_option("--max-loss", o.max_loss, "fail when the final loss is not below this");
      s->add_option("--record-every", o.record_every, "curve subsampling in the report");
    }
    if (n == "persistence" || n == "ph-check") s->add_option("--filtration", o.filtration, "filtration document");
    if (n == "bottleneck") s->add_option("--dim", o.diagram_dim, "homology dimension (default: all present)");
    if (n == "ph-check") {
      s->add_option("--ph-loss", o.ph_loss, "total or bottleneck");
      s->add_option("--reference", o.reference, "reference diagram for --ph-loss bottleneck");
    }
    if (n == "simplicial") {
      s->add_option("--object", o.object, "simplicial object document");
      s->add_option("--level", o.level, "nerve truncation level");
      s->add_option("--scores", o.scores, "per-level scores for adapt_level");
      s->add_option("--threshold", o.threshold, "adapt_level threshold");
    }
  }

  RunReport rep;
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  const Command* selected = nullptr;
  for (const auto& cmd : commands)
    if (subs[cmd.name]->parsed()) selected = &cmd;
  rep.subcommand = selected->name;
  if (g.seed) {
    rep.seed = *g.seed;
  } else if (const char* env = std::getenv("SYMCAT_SEED")) {
    try {
      rep.seed = std::stoull(env);
    } catch (const std::exception&) {
      err << "usage error: SYMCAT_SEED is not an unsigned integer\n";
      return 2;
    }
  }

  Ctx ctx(rep, g);
  const auto start = std::chrono::steady_clock::now();
  try {
    selected->handler(ctx, o);
  } catch (const ValidationStop&) {
  } catch (const Error& e) {
    rep.error = e.what();
  } catch (const std::exception& e) {
    rep.error = std::string("internal: ") + e.what();
  }
  if (g.timing) rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (rep.error) err << rep.error.value() << "\n";

  const std::string js = emit_json(rep);
  if (!g.report_path.empty()) {
    std::ofstream f(g.report_path, std::ios::binary);
    if (!f) {
      err << "cannot write " << g.report_path << "\n";
      return 2;
    }
    f << canonical_dump(make_document("report", to_json(rep))) << "\n";
  }
  out << (g.json ? js : emit_human(rep));
  return rep.exit_code();
}

}  // namespace symcat::cli
