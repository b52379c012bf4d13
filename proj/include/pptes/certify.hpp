#pragma once

// Machine-checkable certificates: a state that is exactly PPT together with a
// positive-by-construction map whose witness value is exactly negative proves
// the state bound entangled and the map non-decomposable. Certificates carry
// the exact rationals plus a dense floating-point cross-check block.

#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pptes/maps.hpp"
#include "pptes/states.hpp"
#include "pptes/version.hpp"

namespace pptes {

struct DenseCrossCheck {
  double min_pt_eigenvalue = 0.0;  // of the materialized, partially transposed state
  double dense_witness = 0.0;      // Tr(choi(map) rho)
  double tolerance = 1e-8;         // agreement band against the exact values
};

enum class Verdict {
  pptes,         // PPT and witness < 0: bound entangled, map non-decomposable
  npt,           // free entanglement, no bound-entanglement claim
  inconclusive,  // PPT but witness >= 0
  unsupported,   // map positivity not established by construction
};

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pptes: return "PPTES";
    case Verdict::npt: return "NPT";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::unsupported: return "unsupported";
  }
  return "unsupported";
}

inline Verdict verdict_from_name(const std::string& name) {
  if (name == "PPTES") return Verdict::pptes;
  if (name == "NPT") return Verdict::npt;
  if (name == "inconclusive") return Verdict::inconclusive;
  if (name == "unsupported") return Verdict::unsupported;
  throw std::runtime_error("unknown verdict \"" + name + "\"");
}

struct Certificate {
  std::string tool;
  LatticeShape shape;
  LatticeState state;
  bool state_is_els = false;
  std::optional<MultiIndex> map_beta0;       // distinguished family
  std::optional<TensorSumSpec> map_spec;     // generic tensor-sum family
  Rational j_min;
  LatticeSite j_argmin;
  Rational witness;
  std::optional<DenseCrossCheck> dense;
  Verdict verdict = Verdict::unsupported;
};

inline bool weights_are_equidistributed(const LatticeState& state) {
  long long support = 0;
  for (long long w : state.weights) {
    if (w != 0 && w != 1) return false;
    support += w;
  }
  return support == state.denom;
}

// Rebuilds the certified map from its recorded construction.
inline MapRep certificate_map(const Certificate& cert) {
  if (cert.map_beta0.has_value()) return lambda_beta0(cert.shape, *cert.map_beta0);
  if (cert.map_spec.has_value()) return tensor_sum_map(*cert.map_spec);
  throw std::runtime_error("certificate carries no map construction");
}

inline bool dense_checks_pass(const Certificate& cert) {
  if (!cert.dense.has_value()) return true;
  const double tol = cert.dense->tolerance;
  const double exact_min_pt =
      to_double(cert.j_min) / static_cast<double>(cert.shape.local_dim());
  return std::abs(cert.dense->min_pt_eigenvalue - exact_min_pt) <= tol &&
         std::abs(cert.dense->dense_witness - to_double(cert.witness)) <= tol;
}

// The full pipeline: exact PPT decision, exact witness, dense cross-checks.
// Only maps that carry a tensor-sum construction are accepted as
// positive-by-construction; anything else yields verdict "unsupported".
inline Certificate certify_pptes(const LatticeState& state, const MapRep& rep,
                                 int dense_cap = 4,
                                 double dense_tolerance = 1e-8) {
  Certificate cert;
  cert.tool = tool_id();
  cert.shape = state.shape;
  cert.state = state;
  cert.state_is_els = weights_are_equidistributed(state);

  if (rep.num_qubits != state.shape.num_coords()) {
    throw std::invalid_argument("certify: map and state sizes differ");
  }

  const PptResult ppt = is_ppt(state);
  cert.j_min = ppt.j_min;
  cert.j_argmin = ppt.argmin;

  if (!rep.tensor_sum.has_value() || !rep.is_diagonal()) {
    cert.verdict = Verdict::unsupported;
    cert.witness = Rational(0);
    return cert;
  }
  if (const auto beta0 = family_beta0_of(rep)) {
    cert.map_beta0 = *beta0;
  } else {
    cert.map_spec = *rep.tensor_sum;
  }
  cert.witness = lattice_witness(rep, state);

  if (state.shape.num_coords() <= dense_cap) {
    DenseCrossCheck check;
    check.tolerance = dense_tolerance;
    const Matrix rho = materialize_dense(state, dense_cap);
    const Matrix rho_pt =
        partial_transpose(rho, state.shape.local_dim(), state.shape.local_dim());
    check.min_pt_eigenvalue = min_eigenvalue(rho_pt);
    check.dense_witness = dense_witness(rep, rho);
    cert.dense = check;
  }

  if (!ppt.ppt) {
    cert.verdict = Verdict::npt;
  } else if (cert.witness < Rational(0) && dense_checks_pass(cert)) {
    cert.verdict = Verdict::pptes;
  } else {
    cert.verdict = Verdict::inconclusive;
  }
  return cert;
}

// ----------------------------------------------------------------------------
// Certificate files (human-readable, diff-stable):
//   pptes-certificate v1
//   tool <id>
//   shape <m> <n>
//   map lambda-beta0 <beta0> | map tensor-sum ...
//   state els <N_I> | state weights <denom>
//   site <s> [<w>]
//   jmin <p/q>
//   jmin-site <s>
//   witness <p/q>
//   dense-min-pt-eigenvalue <17g>   (cross-check block, when present)
//   dense-witness <17g>
//   dense-tolerance <17g>
//   verdict <name>
//   end

inline void save_certificate(std::ostream& os, const Certificate& cert) {
  os << "pptes-certificate v1\n";
  os << "tool " << cert.tool << "\n";
  os << "shape " << cert.shape.m << " " << cert.shape.n << "\n";
  if (cert.map_beta0.has_value()) {
    os << "map lambda-beta0 " << format_multi_index(*cert.map_beta0) << "\n";
  } else if (cert.map_spec.has_value()) {
    os << "map tensor-sum " << cert.map_spec->neg_index << "\n";
    os << "lambda1";
    for (const auto& l : cert.map_spec->lambda1) os << " " << format_rational(l);
    os << "\n";
    os << "lambda2";
    for (const auto& l : cert.map_spec->lambda2) os << " " << format_rational(l);
    os << "\n";
  } else {
    os << "map none\n";
  }
  if (cert.state_is_els) {
    os << "state els " << cert.state.denom << "\n";
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(cert.state.weights.size()); ++i) {
      if (cert.state.weights[i] == 0) continue;
      os << "site " << format_site(site_from_index(cert.shape, i)) << "\n";
    }
  } else {
    os << "state weights " << cert.state.denom << "\n";
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(cert.state.weights.size()); ++i) {
      if (cert.state.weights[i] == 0) continue;
      os << "site " << format_site(site_from_index(cert.shape, i)) << " "
         << cert.state.weights[i] << "\n";
    }
  }
  os << "jmin " << format_rational(cert.j_min) << "\n";
  os << "jmin-site " << format_site(cert.j_argmin) << "\n";
  os << "witness " << format_rational(cert.witness) << "\n";
  if (cert.dense.has_value()) {
    os << "dense-min-pt-eigenvalue "
       << format_double17(cert.dense->min_pt_eigenvalue) << "\n";
    os << "dense-witness " << format_double17(cert.dense->dense_witness) << "\n";
    os << "dense-tolerance " << format_double17(cert.dense->tolerance) << "\n";
  }
  os << "verdict " << verdict_name(cert.verdict) << "\n";
  os << "end\n";
}

inline Certificate load_certificate(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "pptes-certificate v1") {
    throw std::runtime_error("certificate: bad magic line");
  }
  Certificate cert;
  bool have_shape = false, have_state_header = false, is_els = false;
  long long denom = 0;
  std::vector<long long> weights;
  bool have_jmin = false, have_witness = false, have_verdict = false;
  DenseCrossCheck dense;
  bool have_dense = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "end") {
      if (!have_shape || !have_state_header || !have_jmin || !have_witness ||
          !have_verdict) {
        throw std::runtime_error("certificate: missing required fields");
      }
      cert.state = make_lattice_state(cert.shape, std::move(weights), denom);
      cert.state_is_els = is_els;
      if (have_dense) cert.dense = dense;
      return cert;
    }
    if (key == "tool") {
      std::getline(ls >> std::ws, cert.tool);
    } else if (key == "shape") {
      int m = 0, n = 0;
      ls >> m >> n;
      cert.shape = LatticeShape(m, n);
      weights.assign(static_cast<std::size_t>(cert.shape.lattice_size()), 0);
      have_shape = true;
    } else if (key == "map") {
      std::string kind;
      ls >> kind;
      if (kind == "lambda-beta0") {
        std::string beta0_text;
        ls >> beta0_text;
        cert.map_beta0 = parse_multi_index(beta0_text);
      } else if (kind == "tensor-sum") {
        if (!have_shape) throw std::runtime_error("certificate: map before shape");
        TensorSumSpec spec;
        spec.shape = cert.shape;
        ls >> spec.neg_index;
        cert.map_spec = spec;
      } else if (kind != "none") {
        throw std::runtime_error("certificate: unknown map kind " + kind);
      }
    } else if (key == "lambda1" || key == "lambda2") {
      if (!cert.map_spec.has_value()) {
        throw std::runtime_error("certificate: factor vector without tensor-sum map");
      }
      auto& vec = key == "lambda1" ? cert.map_spec->lambda1 : cert.map_spec->lambda2;
      std::string tok;
      while (ls >> tok) vec.push_back(parse_rational(tok));
    } else if (key == "state") {
      std::string kind;
      ls >> kind >> denom;
      if (kind == "els") {
        is_els = true;
      } else if (kind != "weights") {
        throw std::runtime_error("certificate: unknown state kind " + kind);
      }
      have_state_header = true;
    } else if (key == "site") {
      if (!have_shape || !have_state_header) {
        throw std::runtime_error("certificate: site line before headers");
      }
      std::string site_text;
      ls >> site_text;
      long long w = 1;
      if (!is_els && !(ls >> w)) {
        throw std::runtime_error("certificate: weighted site missing weight");
      }
      weights[site_index(cert.shape, parse_site(cert.shape, site_text))] += w;
    } else if (key == "jmin") {
      std::string v;
      ls >> v;
      cert.j_min = parse_rational(v);
      have_jmin = true;
    } else if (key == "jmin-site") {
      std::string v;
      ls >> v;
      cert.j_argmin = parse_site(cert.shape, v);
    } else if (key == "witness") {
      std::string v;
      ls >> v;
      cert.witness = parse_rational(v);
      have_witness = true;
    } else if (key == "dense-min-pt-eigenvalue") {
      ls >> dense.min_pt_eigenvalue;
      have_dense = true;
    } else if (key == "dense-witness") {
      ls >> dense.dense_witness;
      have_dense = true;
    } else if (key == "dense-tolerance") {
      ls >> dense.tolerance;
      have_dense = true;
    } else if (key == "verdict") {
      std::string v;
      ls >> v;
      cert.verdict = verdict_from_name(v);
      have_verdict = true;
    } else {
      throw std::runtime_error("certificate: unknown key \"" + key + "\"");
    }
  }
  throw std::runtime_error("certificate: missing end marker");
}

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> failures;

  void fail(std::string what) {
    ok = false;
    failures.push_back(std::move(what));
  }
};

// Recomputes every claim in the certificate: exact values must match exactly,
// dense values must reproduce within a small band and agree with the exact
// values within the recorded tolerance.
inline VerifyReport verify_certificate(const Certificate& cert,
                                       int dense_cap = 4) {
  VerifyReport report;
  Certificate fresh;
  try {
    fresh = certify_pptes(cert.state, certificate_map(cert), dense_cap);
  } catch (const std::exception& e) {
    report.fail(std::string("recomputation failed: ") + e.what());
    return report;
  }
  if (fresh.j_min != cert.j_min) {
    report.fail("jmin mismatch: recomputed " + format_rational(fresh.j_min) +
                ", stored " + format_rational(cert.j_min));
  }
  if (fresh.witness != cert.witness) {
    report.fail("witness mismatch: recomputed " + format_rational(fresh.witness) +
                ", stored " + format_rational(cert.witness));
  }
  if (fresh.verdict != cert.verdict) {
    report.fail(std::string("verdict mismatch: recomputed ") +
                verdict_name(fresh.verdict) + ", stored " +
                verdict_name(cert.verdict));
  }
  if (cert.dense.has_value()) {
    if (!fresh.dense.has_value()) {
      report.fail("stored dense block cannot be recomputed under the dense cap");
    } else {
      if (std::abs(fresh.dense->min_pt_eigenvalue -
                   cert.dense->min_pt_eigenvalue) > 1e-9) {
        report.fail("dense min PT eigenvalue does not reproduce");
      }
      if (std::abs(fresh.dense->dense_witness - cert.dense->dense_witness) >
          1e-9) {
        report.fail("dense witness does not reproduce");
      }
    }
    const double exact_min_pt =
        to_double(cert.j_min) / static_cast<double>(cert.shape.local_dim());
    if (std::abs(cert.dense->min_pt_eigenvalue - exact_min_pt) >
        cert.dense->tolerance) {
      report.fail("dense min PT eigenvalue disagrees with exact jmin");
    }
    if (std::abs(cert.dense->dense_witness - to_double(cert.witness)) >
        cert.dense->tolerance) {
      report.fail("dense witness disagrees with exact witness");
    }
  }
  return report;
}

}  // namespace pptes
