#include "spectra/dimension.hpp"

#include <string>

#include "spectra/error.hpp"

namespace spectra {

AFSummary::AFSummary(ExtNat td, ExtNat dim) : td_(td), dim_(dim) {
  if (td.is_inf()) throw NonAF("an AF-domain has finite transcendence degree");
  if (td < dim) {
    throw InvalidArgument("AF summary with dim " + dim.to_string() + " > td " + td.to_string());
  }
}

ExtNat delta(unsigned s, unsigned d, const SpectralPoset& poset, std::string_view node) {
  if (d > s) {
    throw InvalidArgument("delta(s, d, p) needs d <= s, got s = " + std::to_string(s) +
                          ", d = " + std::to_string(d));
  }
  const PrimeNode& p = poset.node(node);
  ExtNat poly_height;
  if (s == 0) {
    poly_height = poset.height(node);
  } else {
    auto it = p.poly_heights.find(s);
    if (it == p.poly_heights.end()) {
      const std::string label = "poly_heights(" + std::to_string(s) + ")";
      throw MissingLabel(label, "node '" + p.id + "' has no " + label + " label");
    }
    poly_height = it->second;
  }
  if (!p.residue_td) {
    throw MissingLabel("residue_td", "node '" + p.id + "' has no residue_td label");
  }
  return poly_height + ext_min(ExtNat(s), ExtNat(d) + *p.residue_td);
}

ExtNat big_d(unsigned s, unsigned d, const SpectralPoset& poset) {
  if (!poset.complete()) {
    throw IncompletePoset("D(s, d, A) maximizes over all of Spec(A); the poset is not "
                          "attested complete");
  }
  ExtNat best(0);
  for (const PrimeNode& p : poset.nodes()) best = ext_max(best, delta(s, d, poset, p.id));
  return best;
}

ExtNat dim_tensor_fields(ExtNat td_k, ExtNat td_l) { return ext_min(td_k, td_l); }

ExtNat dim_tensor_af_pair(const AFSummary& a, const AFSummary& b) {
  return ext_min(a.dim() + b.td(), a.td() + b.dim());
}

ExtNat dim_tensor_af_general(const AFSummary& a, const SpectralPoset& r) {
  const auto s = a.td().value();
  const auto d = a.dim().value();
  return big_d(static_cast<unsigned>(s), static_cast<unsigned>(d), r);
}

}  // namespace spectra
