#ifndef ORBISPEC_ORBISPEC_HPP
#define ORBISPEC_ORBISPEC_HPP

#include "orbispec/bounds.hpp"
#include "orbispec/dirichlet.hpp"
#include "orbispec/errors.hpp"
#include "orbispec/groups.hpp"
#include "orbispec/json_io.hpp"
#include "orbispec/modelspectra.hpp"
#include "orbispec/netpack.hpp"
#include "orbispec/spaceform.hpp"
#include "orbispec/weyl.hpp"

#ifndef ORBISPEC_VERSION
#define ORBISPEC_VERSION "0.1.0"
#endif

#endif  // ORBISPEC_ORBISPEC_HPP
