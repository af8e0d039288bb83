#include "cqoa/cqoa.h"

#include <cstring>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cqoa/brst.hpp"
#include "cqoa/engine.hpp"
#include "cqoa/parser.hpp"
#include "cqoa/statespace.hpp"

using nlohmann::json;
using namespace cqoa;

struct cqoa_algebra {
  AlgebraPtr spec;
  std::shared_ptr<Engine> engine;
  std::optional<BrstContext> brst;
};

struct cqoa_expr {
  FieldExpr e;
};

namespace {

thread_local std::string g_last_error;

int set_error(int code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <typename F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    return set_error(CQOA_ERR_PARSE, e.what());
  } catch (const AlgebraMismatchError& e) {
    return set_error(CQOA_ERR_ALGEBRA_MISMATCH, e.what());
  } catch (const PreconditionError& e) {
    return set_error(CQOA_ERR_PRECONDITION, e.what());
  } catch (const VerificationError& e) {
    return set_error(CQOA_ERR_VERIFY_FAILED, e.what());
  } catch (const NotInSpanError& e) {
    return set_error(CQOA_ERR_NOT_IN_SPAN, e.what());
  } catch (const std::invalid_argument& e) {
    return set_error(CQOA_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return set_error(CQOA_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

int check_format(const char* format) {
  if (!format) return 0;
  std::string f = format;
  if (f != "text" && f != "json")
    throw std::invalid_argument("format must be \"text\" or \"json\"");
  return f == "json";
}

void check_expr(const cqoa_algebra* a, const cqoa_expr* e) {
  if (!e) throw std::invalid_argument("null expression handle");
  if (!e->e.is_zero() && e->e.algebra() != a->spec.get())
    throw AlgebraMismatchError("expression belongs to a different algebra");
}

FieldExpr rebased(const cqoa_algebra* a, const cqoa_expr* e) {
  check_expr(a, e);
  if (e->e.is_zero()) return FieldExpr::zero(a->spec.get());
  return e->e;
}

BrstContext& brst_of(cqoa_algebra* a) {
  if (!a->brst) throw PreconditionError("this operation needs a brst algebra");
  return *a->brst;
}

std::string state_word(const BasisState& s) {
  std::ostringstream os;
  bool first = true;
  auto emit = [&](const std::string& piece) {
    if (!first) os << " ";
    os << piece;
    first = false;
  };
  for (int n : s.bmodes) emit("b(-" + std::to_string(n) + ")");
  for (int m : s.cmodes) emit("c(-" + std::to_string(m) + ")");
  for (int k : s.matter) emit("L_{-" + std::to_string(k) + "}");
  if (first) os << "vac";
  return os.str();
}

}  // namespace

extern "C" {

const char* cqoa_last_error(void) { return g_last_error.c_str(); }

void cqoa_string_free(char* s) { std::free(s); }

int cqoa_algebra_create(const char* selector, cqoa_algebra** out) {
  return guarded([&]() {
    if (!selector || !out) throw std::invalid_argument("null argument");
    std::string sel = selector;
    std::string head = sel, arg;
    if (auto pos = sel.find(':'); pos != std::string::npos) {
      head = sel.substr(0, pos);
      arg = sel.substr(pos + 1);
    }
    auto handle = std::make_unique<cqoa_algebra>();
    auto parse_kappa = [&]() -> std::optional<Coefficient> {
      if (arg.empty()) return std::nullopt;  // formal
      if (arg.rfind("kappa=", 0) != 0)
        throw std::invalid_argument("expected kappa=<rational|sym> in selector");
      std::string val = arg.substr(6);
      if (val == "sym") return std::nullopt;
      Coefficient c = parse_coefficient(val);
      if (!c.is_rational()) throw std::invalid_argument("kappa must be rational or sym");
      return c;
    };
    if (head == "bc") {
      if (arg.empty()) throw std::invalid_argument("bc selector needs a weight: bc:<int>");
      std::size_t used = 0;
      int lambda = std::stoi(arg, &used);
      if (used != arg.size()) throw std::invalid_argument("bad bc weight parameter");
      handle->spec = bc_algebra(lambda);
      handle->engine = std::make_shared<Engine>(handle->spec);
    } else if (head == "vir") {
      auto k = parse_kappa();
      handle->spec = k ? virasoro_algebra(*k) : virasoro_algebra_formal();
      handle->engine = std::make_shared<Engine>(handle->spec);
    } else if (head == "brst") {
      auto k = parse_kappa();
      handle->brst.emplace(k ? BrstContext::make(*k) : BrstContext::make_formal());
      handle->spec = handle->brst->algebra_ptr();
      handle->engine = handle->brst->engine_ptr();
    } else {
      throw std::invalid_argument("unknown algebra selector: " + sel);
    }
    *out = handle.release();
    return CQOA_OK;
  });
}

void cqoa_algebra_free(cqoa_algebra* a) { delete a; }

int cqoa_parse(cqoa_algebra* a, const char* src, cqoa_expr** out) {
  return guarded([&]() {
    if (!a || !src || !out) throw std::invalid_argument("null argument");
    *out = new cqoa_expr{parse_expr(src, *a->engine)};
    return CQOA_OK;
  });
}

void cqoa_expr_free(cqoa_expr* e) { delete e; }

int cqoa_render(const cqoa_expr* e, char** out) {
  return guarded([&]() {
    if (!e || !out) throw std::invalid_argument("null argument");
    *out = dup_string(render(e->e));
    return CQOA_OK;
  });
}

int cqoa_expr_is_zero(const cqoa_expr* e, int* out) {
  return guarded([&]() {
    if (!e || !out) throw std::invalid_argument("null argument");
    *out = e->e.is_zero() ? 1 : 0;
    return CQOA_OK;
  });
}

int cqoa_expr_equal(const cqoa_expr* x, const cqoa_expr* y, int* out) {
  return guarded([&]() {
    if (!x || !y || !out) throw std::invalid_argument("null argument");
    *out = (x->e == y->e || (x->e - y->e).is_zero()) ? 1 : 0;
    return CQOA_OK;
  });
}

int cqoa_wick(cqoa_algebra* a, const cqoa_expr* u, const cqoa_expr* v, cqoa_expr** out) {
  return guarded([&]() {
    if (!a || !out) throw std::invalid_argument("null argument");
    *out = new cqoa_expr{a->engine->wick(rebased(a, u), rebased(a, v))};
    return CQOA_OK;
  });
}

int cqoa_circle(cqoa_algebra* a, const cqoa_expr* u, long n, const cqoa_expr* v,
                cqoa_expr** out) {
  return guarded([&]() {
    if (!a || !out) throw std::invalid_argument("null argument");
    *out = new cqoa_expr{a->engine->circle(rebased(a, u), n, rebased(a, v))};
    return CQOA_OK;
  });
}

int cqoa_normal_form(cqoa_algebra* a, const cqoa_expr* e, cqoa_expr** out) {
  return guarded([&]() {
    if (!a || !out) throw std::invalid_argument("null argument");
    *out = new cqoa_expr{a->engine->normal_form(rebased(a, e))};
    return CQOA_OK;
  });
}

int cqoa_derivative(cqoa_algebra* a, const cqoa_expr* e, int order, cqoa_expr** out) {
  return guarded([&]() {
    if (!a || !out || order < 0) throw std::invalid_argument("bad argument");
    *out = new cqoa_expr{a->engine->derivative(rebased(a, e), order)};
    return CQOA_OK;
  });
}

int cqoa_is_local(cqoa_algebra* a, const cqoa_expr* u, const cqoa_expr* v, int* out) {
  return guarded([&]() {
    if (!a || !out) throw std::invalid_argument("null argument");
    *out = a->engine->is_local(rebased(a, u), rebased(a, v));
    return CQOA_OK;
  });
}

int cqoa_ope(cqoa_algebra* a, const cqoa_expr* u, const cqoa_expr* v, const char* format,
             char** out) {
  return guarded([&]() {
    if (!a || !out) throw std::invalid_argument("null argument");
    bool as_json = check_format(format);
    OPEResult r = a->engine->ope(rebased(a, u), rebased(a, v));
    if (as_json) {
      json doc;
      doc["singular"] = json::array();
      for (const auto& [n, e] : r.singular)
        doc["singular"].push_back({{"n", n}, {"expr", render(e)}});
      doc["locality_order"] = r.locality_order;
      *out = dup_string(doc.dump(2));
    } else {
      std::ostringstream os;
      for (const auto& [n, e] : r.singular) os << "n=" << n << ": " << render(e) << "\n";
      os << "locality_order: " << r.locality_order << "\n";
      *out = dup_string(os.str());
    }
    return CQOA_OK;
  });
}

int cqoa_basis(cqoa_algebra* a, int ghost, int weight, int dump_states, const char* format,
               char** out) {
  return guarded([&]() {
    if (!a || !out) throw std::invalid_argument("null argument");
    bool as_json = check_format(format);
    StateSpace& sp = a->engine->space();
    auto monos = sp.canonical_monomials(ghost, weight);
    if (as_json) {
      json doc;
      doc["ghost"] = ghost;
      doc["weight"] = weight;
      doc["dimension"] = monos.size();
      doc["monomials"] = json::array();
      for (const auto& m : monos) {
        json entry;
        entry["expr"] = render_monomial(m, *a->spec);
        if (dump_states) {
          json sts = json::array();
          for (const auto& [s, c] :
               sp.state_of(FieldExpr::monomial(a->spec.get(), m)))
            sts.push_back({{"state", state_word(s)}, {"coefficient", c.to_string()}});
          entry["state"] = sts;
        }
        doc["monomials"].push_back(entry);
      }
      *out = dup_string(doc.dump(2));
    } else {
      std::ostringstream os;
      os << "ghost " << ghost << ", weight " << weight << ", dimension " << monos.size()
         << "\n";
      for (const auto& m : monos) {
        os << render_monomial(m, *a->spec) << "\n";
        if (dump_states)
          for (const auto& [s, c] :
               sp.state_of(FieldExpr::monomial(a->spec.get(), m)))
            os << "  " << state_word(s) << "  " << c.to_string() << "\n";
      }
      *out = dup_string(os.str());
    }
    return CQOA_OK;
  });
}

int cqoa_check_axioms(cqoa_algebra* a, int max_weight, long n_floor, const char* format,
                      char** out, int* passed) {
  return guarded([&]() {
    if (!a || !out || !passed) throw std::invalid_argument("null argument");
    bool as_json = check_format(format);
    auto rep = a->engine->check_semi_infinite_axioms(max_weight, n_floor);
    *passed = rep.passed ? 1 : 0;
    if (as_json) {
      json doc;
      doc["passed"] = rep.passed;
      doc["pairs_checked"] = rep.pairs_checked;
      doc["max_weight"] = max_weight;
      doc["n_floor"] = n_floor;
      if (!rep.passed) doc["first_failure"] = rep.first_failure;
      *out = dup_string(doc.dump(2));
    } else {
      std::ostringstream os;
      os << (rep.passed ? "pass" : "FAIL") << " (pairs checked: " << rep.pairs_checked
         << ", max weight " << max_weight << ", n floor " << n_floor << ")\n";
      if (!rep.passed) os << rep.first_failure << "\n";
      *out = dup_string(os.str());
    }
    return CQOA_OK;
  });
}

int cqoa_oracle_compare(cqoa_algebra* a, const cqoa_expr* u, long n, const cqoa_expr* v,
                        int cutoff, const char* format, char** out, int* matches) {
  return guarded([&]() {
    if (!a || !out || !matches) throw std::invalid_argument("null argument");
    bool as_json = check_format(format);
    FieldExpr ue = rebased(a, u), ve = rebased(a, v);
    FieldExpr engine_result = a->engine->circle(ue, n, ve);
    bool ok = a->engine->space().oracle_matches(ue, n, ve, engine_result, cutoff);
    *matches = ok ? 1 : 0;
    if (as_json) {
      json doc;
      doc["n"] = n;
      doc["cutoff"] = cutoff;
      doc["engine"] = render(engine_result);
      doc["matches"] = ok;
      *out = dup_string(doc.dump(2));
    } else {
      std::ostringstream os;
      os << "engine: " << render(engine_result) << "\n";
      os << "oracle agreement (cutoff " << cutoff << "): " << (ok ? "pass" : "FAIL") << "\n";
      *out = dup_string(os.str());
    }
    return CQOA_OK;
  });
}

int cqoa_brst_current(cqoa_algebra* a, cqoa_expr** out) {
  return guarded([&]() {
    if (!a || !out) throw std::invalid_argument("null argument");
    *out = new cqoa_expr{brst_of(a).current()};
    return CQOA_OK;
  });
}

int cqoa_brst_d(cqoa_algebra* a, const cqoa_expr* u, cqoa_expr** out) {
  return guarded([&]() {
    if (!a || !out) throw std::invalid_argument("null argument");
    *out = new cqoa_expr{brst_of(a).brst_d(rebased(a, u))};
    return CQOA_OK;
  });
}

int cqoa_brst_dsquare(cqoa_algebra* a, const char* format, char** out) {
  return guarded([&]() {
    if (!a || !out) throw std::invalid_argument("null argument");
    bool as_json = check_format(format);
    auto rep = brst_of(a).nilpotency_report();
    if (as_json) {
      json doc;
      doc["j_square"] = render(rep.j_square);
      doc["contributions"] = json::array();
      for (const auto& c : rep.contributions) doc["contributions"].push_back(render(c));
      *out = dup_string(doc.dump(2));
    } else {
      std::ostringstream os;
      os << render(rep.j_square) << "\n";
      *out = dup_string(os.str());
    }
    return CQOA_OK;
  });
}

int cqoa_brst_nilpotency(cqoa_algebra* a, const char* format, char** out, int* verified) {
  return guarded([&]() {
    if (!a || !out || !verified) throw std::invalid_argument("null argument");
    bool as_json = check_format(format);
    BrstContext& ctx = brst_of(a);
    auto rep = ctx.nilpotency_report();
    bool reduced_zero = rep.reduced.is_zero();
    bool ok = rep.matches_closed_form &&
              (ctx.kappa_formal() ? rep.reduction_matches
                                  : (reduced_zero == ctx.kappa_is_26()));
    *verified = ok ? 1 : 0;
    if (as_json) {
      json doc;
      doc["j_square"] = render(rep.j_square);
      doc["closed_form"] = render(rep.closed_form);
      doc["reduced_mod_derivative"] = render(rep.reduced);
      doc["obstruction_class"] = render(rep.obstruction_class);
      doc["square_zero_mod_derivative"] = reduced_zero;
      doc["verified"] = ok;
      *out = dup_string(doc.dump(2));
    } else {
      std::ostringstream os;
      os << "J circle_0 J = " << render(rep.j_square) << "\n";
      os << "reduced mod derivatives: " << render(rep.reduced) << "\n";
      os << "verified: " << (ok ? "yes" : "NO") << "\n";
      *out = dup_string(os.str());
    }
    return CQOA_OK;
  });
}

int cqoa_brst_kernel(cqoa_algebra* a, int ghost, int weight, const char* format, char** out) {
  return guarded([&]() {
    if (!a || !out) throw std::invalid_argument("null argument");
    bool as_json = check_format(format);
    auto res = brst_of(a).q_closed_basis(weight, ghost);
    if (as_json) {
      json doc;
      doc["ghost"] = ghost;
      doc["weight"] = weight;
      doc["kernel_dim"] = res.kernel_dim;
      doc["image_dim"] = res.image_dim;
      doc["kernel"] = json::array();
      for (const auto& k : res.kernel) doc["kernel"].push_back(render(k));
      *out = dup_string(doc.dump(2));
    } else {
      std::ostringstream os;
      os << "ghost " << ghost << ", weight " << weight << ": kernel dim " << res.kernel_dim
         << ", image dim " << res.image_dim << "\n";
      for (const auto& k : res.kernel) os << render(k) << "\n";
      *out = dup_string(os.str());
    }
    return CQOA_OK;
  });
}

int cqoa_reduce_mod_derivative(cqoa_algebra* a, const cqoa_expr* e, cqoa_expr** out) {
  return guarded([&]() {
    if (!a || !out) throw std::invalid_argument("null argument");
    *out = new cqoa_expr{brst_of(a).reduce_mod_derivative(rebased(a, e))};
    return CQOA_OK;
  });
}

int cqoa_bv_delta(cqoa_algebra* a, const cqoa_expr* u, cqoa_expr** out) {
  return guarded([&]() {
    if (!a || !out) throw std::invalid_argument("null argument");
    *out = new cqoa_expr{brst_of(a).bv_delta(rebased(a, u))};
    return CQOA_OK;
  });
}

int cqoa_bv_bracket(cqoa_algebra* a, const cqoa_expr* u, const cqoa_expr* v, cqoa_expr** out) {
  return guarded([&]() {
    if (!a || !out) throw std::invalid_argument("null argument");
    *out = new cqoa_expr{brst_of(a).bv_bracket(rebased(a, u), rebased(a, v))};
    return CQOA_OK;
  });
}

int cqoa_bv_second_order(cqoa_algebra* a, const cqoa_expr* A, const cqoa_expr* B,
                         const cqoa_expr* C, int* holds) {
  return guarded([&]() {
    if (!a || !holds) throw std::invalid_argument("null argument");
    *holds = brst_of(a).second_order_identity_check(rebased(a, A), rebased(a, B),
                                                    rebased(a, C))
                 ? 1
                 : 0;
    return CQOA_OK;
  });
}

}  // extern "C"
