#pragma once

#include "stutterkit/limits.hpp"
#include "stutterkit/ltl.hpp"
#include "stutterkit/tgba.hpp"

namespace stutterkit {

// Tableau translation of an LTL formula into a TGBA over the formula's
// atoms (sorted).  One acceptance mark per Until/Eventually subformula; an
// edge carries a mark iff that obligation was not postponed across it.  The
// result is trimmed and quotiented (language preserved).
Tgba translate(const Ltl& f, const ExecLimits& lim = {});

}  // namespace stutterkit
