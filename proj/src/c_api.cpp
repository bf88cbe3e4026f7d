#include "mubsearch/mubsearch.h"

#include <cstdlib>
#include <memory>
#include <cstring>
#include <exception>
#include <new>
#include <sstream>
#include <string>

#include "mubsearch/constructions.hpp"
#include "mubsearch/harness.hpp"
#include "mubsearch/io.hpp"
#include "mubsearch/objective.hpp"

struct mub_config {
  mub::ExperimentConfig cfg;
};

struct mub_basis_set {
  mub::BasisSet set;
};

struct mub_verification {
  mub::Verification v;
  std::vector<std::size_t> subset;
  std::size_t d = 0;
};

struct mub_search_result {
  mub::SearchRun run;
  mub::ExperimentConfig cfg;
};

namespace {

thread_local std::string g_last_error;

mub_status fail(mub_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

// Maps the core's exception types onto status codes.
template <class Fn>
mub_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return MUB_OK;
  } catch (const mub::FormatError& e) {
    return fail(MUB_ERR_FORMAT, e.what());
  } catch (const mub::IoError& e) {
    return fail(MUB_ERR_IO, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(MUB_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(MUB_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(MUB_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(MUB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MUB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MUB_ERR_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define MUB_REQUIRE(cond, what) \
  do {                          \
    if (!(cond)) return fail(MUB_ERR_INVALID_ARGUMENT, what); \
  } while (0)

}  // namespace

extern "C" {

const char* mub_version(void) { return "1.0.0"; }

const char* mub_last_error(void) { return g_last_error.c_str(); }

void mub_string_free(char* s) { std::free(s); }

// ---- config ----

mub_status mub_config_create(mub_config** out) {
  MUB_REQUIRE(out, "null output handle");
  return guarded([&] { *out = new mub_config{}; });
}

mub_status mub_config_load(const char* path, mub_config** out) {
  MUB_REQUIRE(path && out, "null argument");
  return guarded([&] { *out = new mub_config{mub::load_experiment_config(path)}; });
}

mub_status mub_config_set(mub_config* cfg, const char* key, const char* value) {
  MUB_REQUIRE(cfg && key && value, "null argument");
  return guarded([&] {
    mub::ExperimentConfig next = cfg->cfg;
    mub::set_config_value(next, key, value);
    cfg->cfg = std::move(next);
  });
}

mub_status mub_config_to_json(const mub_config* cfg, char** out_json) {
  MUB_REQUIRE(cfg && out_json, "null argument");
  return guarded([&] { *out_json = copy_string(mub::experiment_config_to_json(cfg->cfg)); });
}

void mub_config_free(mub_config* cfg) { delete cfg; }

// ---- search ----

mub_status mub_search_run(const mub_config* cfg, mub_search_result** out) {
  MUB_REQUIRE(cfg && out, "null argument");
  return guarded([&] {
    try {
      cfg->cfg.search.validate();
    } catch (const std::invalid_argument& e) {
      throw mub::FormatError(e.what());
    }
    auto result = std::make_unique<mub_search_result>();
    result->cfg = cfg->cfg;
    result->run = mub::run_search_experiment(cfg->cfg);
    *out = result.release();
  });
}

double mub_search_best_objective(const mub_search_result* r) {
  return r ? r->run.result.best_objective : 0.0;
}

int mub_search_found(const mub_search_result* r) { return r && r->run.found ? 1 : 0; }

size_t mub_search_success_count(const mub_search_result* r) {
  return r ? r->run.result.success_count : 0;
}

size_t mub_search_restart_count(const mub_search_result* r) {
  return r ? r->run.result.restarts.size() : 0;
}

mub_status mub_search_restart_info(const mub_search_result* r, size_t index, mub_restart_info* out) {
  MUB_REQUIRE(r && out, "null argument");
  MUB_REQUIRE(index < r->run.result.restarts.size(), "restart index out of range");
  const auto& rec = r->run.result.restarts[index];
  *out = {rec.seed, rec.initial_objective, rec.final_objective, rec.evaluations, rec.wall_seconds,
          rec.success ? 1 : 0};
  return MUB_OK;
}

mub_status mub_search_output_dir(const mub_search_result* r, char** out_path) {
  MUB_REQUIRE(r && out_path, "null argument");
  return guarded([&] { *out_path = copy_string(r->run.output_dir.string()); });
}

mub_status mub_search_describe(const mub_search_result* r, char** out_text) {
  MUB_REQUIRE(r && out_text, "null argument");
  return guarded([&] { *out_text = copy_string(mub::describe_search(r->run, r->cfg)); });
}

mub_status mub_search_best_set(const mub_search_result* r, mub_basis_set** out) {
  MUB_REQUIRE(r && out, "null argument");
  return guarded([&] { *out = new mub_basis_set{r->run.result.best_set}; });
}

void mub_search_result_free(mub_search_result* r) { delete r; }

// ---- basis sets ----

mub_status mub_basis_set_create(size_t d, size_t m, int gauge_fixed, const double* entries,
                                mub_basis_set** out) {
  MUB_REQUIRE(entries && out, "null argument");
  return guarded([&] {
    mub::BasisSet set{d, m, gauge_fixed != 0, {}};
    const std::size_t per = d * d;
    for (std::size_t b = 0; b < m; ++b) {
      std::vector<mub::Complex> z(per);
      for (std::size_t k = 0; k < per; ++k) z[k] = {entries[2 * (b * per + k)], entries[2 * (b * per + k) + 1]};
      set.bases.emplace_back(d, d, std::move(z));
    }
    set.validate();
    *out = new mub_basis_set{std::move(set)};
  });
}

mub_status mub_basis_set_load(const char* path, mub_basis_set** out) {
  MUB_REQUIRE(path && out, "null argument");
  return guarded([&] { *out = new mub_basis_set{mub::load_basis_set(path)}; });
}

mub_status mub_basis_set_save(const mub_basis_set* set, const char* path) {
  MUB_REQUIRE(set && path, "null argument");
  return guarded([&] { mub::save_basis_set(set->set, path); });
}

mub_status mub_basis_set_dims(const mub_basis_set* set, size_t* d, size_t* m) {
  MUB_REQUIRE(set && d && m, "null argument");
  *d = set->set.d;
  *m = set->set.m;
  return MUB_OK;
}

mub_status mub_basis_set_get_basis(const mub_basis_set* set, size_t index, double* out,
                                   size_t capacity) {
  MUB_REQUIRE(set && out, "null argument");
  MUB_REQUIRE(index < set->set.bases.size(), "basis index out of range");
  const auto entries = set->set.bases[index].entries();
  MUB_REQUIRE(capacity >= 2 * entries.size(), "output buffer too small");
  for (std::size_t k = 0; k < entries.size(); ++k) {
    out[2 * k] = entries[k].real();
    out[2 * k + 1] = entries[k].imag();
  }
  return MUB_OK;
}

mub_status mub_basis_set_objective(const mub_basis_set* set, double* out) {
  MUB_REQUIRE(set && out, "null argument");
  return guarded([&] { *out = mub::objective_of_bases(set->set.bases); });
}

void mub_basis_set_free(mub_basis_set* set) { delete set; }

mub_status mub_construct(const char* kind, size_t d, mub_basis_set** out) {
  MUB_REQUIRE(kind && out, "null argument");
  return guarded([&] {
    const std::string k = kind;
    mub::BasisSet set;
    if (k == "prime") {
      set = mub::prime_mub_set(d);
    } else if (k == "fourier") {
      set = {d, 2, true, {mub::identity_basis(d), mub::fourier_matrix(d)}};
    } else if (k == "identity") {
      set = {d, 1, true, {mub::identity_basis(d)}};
    } else {
      throw std::invalid_argument("unknown construction '" + k + "' (expected prime, fourier or identity)");
    }
    set.validate();
    *out = new mub_basis_set{std::move(set)};
  });
}

// ---- verification ----

mub_status mub_verify(const mub_basis_set* set, double tol, mub_verification** out) {
  MUB_REQUIRE(set && out, "null argument");
  return guarded([&] {
    auto v = std::make_unique<mub_verification>();
    v->v = mub::verify_mub(set->set, tol);
    v->subset = mub::max_mu_subset(set->set, tol);
    v->d = set->set.d;
    *out = v.release();
  });
}

int mub_verification_passed(const mub_verification* v) { return v && v->v.passed ? 1 : 0; }
int mub_verification_orthonormal(const mub_verification* v) { return v && v->v.orthonormal ? 1 : 0; }
int mub_verification_unbiased(const mub_verification* v) { return v && v->v.unbiased ? 1 : 0; }
double mub_verification_total(const mub_verification* v) { return v ? v->v.report.total : 0.0; }

mub_status mub_verification_subset(const mub_verification* v, size_t* indices, size_t capacity,
                                   size_t* count) {
  MUB_REQUIRE(v && count, "null argument");
  *count = v->subset.size();
  MUB_REQUIRE(capacity == 0 || indices, "null index buffer");
  for (std::size_t k = 0; k < v->subset.size() && k < capacity; ++k) indices[k] = v->subset[k];
  return MUB_OK;
}

mub_status mub_verification_to_json(const mub_verification* v, char** out_json) {
  MUB_REQUIRE(v && out_json, "null argument");
  return guarded([&] { *out_json = copy_string(mub::verification_to_json(v->v, v->subset) + "\n"); });
}

mub_status mub_verification_describe(const mub_verification* v, char** out_text) {
  MUB_REQUIRE(v && out_text, "null argument");
  return guarded([&] {
    const auto& r = v->v.report;
    std::ostringstream os;
    os.precision(6);
    os << std::scientific;
    os << "orthonormality: " << (v->v.orthonormal ? "ok" : "FAILED")
       << " (worst unitarity defect " << v->v.worst_unitarity_defect << ")\n";
    os << "unbiasedness:   " << (v->v.unbiased ? "ok" : "FAILED")
       << " (worst | |overlap| - 1/sqrt(d) | " << v->v.worst_modulus_deviation << ")\n";
    os << "total residual " << r.total << " over " << r.pair_count << " pair(s)\n";
    for (const auto& p : r.per_pair) os << "  pair (" << p.i << "," << p.j << "): " << p.residual << "\n";
    if (r.pair_count > 0) {
      const auto& w = r.worst_entry;
      os << "worst entry: pair (" << w.basis_i << "," << w.basis_j << ") entry (" << w.row << ","
         << w.col << ") | |z|^2 - 1/d | = " << w.value << "\n";
    }
    os << "max MU subset: [";
    for (std::size_t k = 0; k < v->subset.size(); ++k) os << (k ? ", " : "") << v->subset[k];
    os << "]\n" << (v->v.passed ? "MU set verified" : "not a MU set at this tolerance") << "\n";
    *out_text = copy_string(os.str());
  });
}

void mub_verification_free(mub_verification* v) { delete v; }

// ---- sampling and traces ----

mub_status mub_sample_write(size_t n, size_t count, const char* mode, uint64_t seed,
                            const char* path, mub_sample_stats* stats, char** out_text) {
  MUB_REQUIRE(mode && path, "null argument");
  return guarded([&] {
    const auto outcome = mub::write_samples(n, count, mub::parse_sample_mode(mode), seed, path);
    if (stats) {
      const double z = outcome.moments.max_abs_z();
      *stats = {outcome.written, 1.0 / static_cast<double>(n), z, z <= 3.0 ? 1 : 0};
    }
    if (out_text) *out_text = copy_string(mub::describe_moments(outcome.moments));
  });
}

mub_status mub_trace_export(const char* run_dir, const char* out_path, size_t* rows) {
  MUB_REQUIRE(run_dir && out_path, "null argument");
  return guarded([&] {
    const std::size_t written = mub::export_traces(run_dir, out_path);
    if (rows) *rows = written;
  });
}

}  // extern "C"
