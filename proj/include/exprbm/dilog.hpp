#pragma once

namespace exprbm {

// Real dilogarithm Li2(x) for x <= 1. Series on |x| <= 1/2 plus the standard
// reflections elsewhere; accurate to ~1e-15 relative. DomainError for x > 1.
double dilog(double x);

}  // namespace exprbm
