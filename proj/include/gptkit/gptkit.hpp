#pragma once

#include <gptkit/types.hpp>
#include <gptkit/linalg.hpp>
#include <gptkit/lp.hpp>
#include <gptkit/polytope.hpp>
#include <gptkit/core.hpp>
#include <gptkit/composite.hpp>
#include <gptkit/bloch.hpp>
#include <gptkit/hermitian.hpp>
#include <gptkit/instances.hpp>
#include <gptkit/discrimination.hpp>
#include <gptkit/groups.hpp>
#include <gptkit/bell.hpp>
#include <gptkit/audit.hpp>
#include <gptkit/report.hpp>
#include <gptkit/theory_spec.hpp>
