#pragma once

#include "spectra/numeric.hpp"
#include "spectra/poset.hpp"

namespace spectra {

/// Transcendence degree and Krull dimension of an AF-domain
/// (ht(p) + t.d.(A/p) = t.d.(A) for every prime p).
class AFSummary {
 public:
  /// Throws NonAF when td is infinite, InvalidArgument when dim > td.
  AFSummary(ExtNat td, ExtNat dim);

  ExtNat td() const { return td_; }
  ExtNat dim() const { return dim_; }

  friend bool operator==(const AFSummary&, const AFSummary&) = default;

 private:
  ExtNat td_;
  ExtNat dim_;
};

// Wadsworth's functionals. s = 0 is accepted as "no indeterminates", with
// ht(p[X_1..X_0]) read as the height of p.

/// ht(p[X_1..X_s]) + min(s, d + t.d.(A/p)); requires d <= s.
ExtNat delta(unsigned s, unsigned d, const SpectralPoset& poset, std::string_view node);

/// max of delta over every node of a complete poset.
ExtNat big_d(unsigned s, unsigned d, const SpectralPoset& poset);

/// dim(K (x) L) = min(t.d.(K), t.d.(L)) for field extensions.
ExtNat dim_tensor_fields(ExtNat td_k, ExtNat td_l);

/// dim(A (x) B) = min(dim A + t.d. B, t.d. A + dim B) for two AF-domains.
ExtNat dim_tensor_af_pair(const AFSummary& a, const AFSummary& b);

/// dim(A (x) R) = D(t.d. A, dim A, R) for an AF-domain A and any algebra R.
ExtNat dim_tensor_af_general(const AFSummary& a, const SpectralPoset& r);

}  // namespace spectra
