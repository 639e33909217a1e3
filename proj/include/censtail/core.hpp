#ifndef CENSTAIL_CORE_HPP
#define CENSTAIL_CORE_HPP

#include "censtail/types.hpp"

namespace censtail {

/// Sorts the sample (stable, so tied z keep their input order and their own
/// censoring flags) and computes p_hat, the mean of the k top flags.
/// Requires 1 <= k <= n-1.
TailView make_tail_view(const CensoredSample& sample, int k);

/// gamma_1 = raw / p_hat. Throws fully_censored when p_hat == 0.
double adapt_to_censoring(double raw, const TailView& view);

/// Same sorted sample, different threshold index; avoids re-sorting when
/// sweeping k.
TailView change_k(const TailView& view, int k);

/// k = floor(fraction * n); validated against 1 <= k <= n-1.
int k_from_fraction(std::size_t n, double fraction);

}  // namespace censtail

#endif
