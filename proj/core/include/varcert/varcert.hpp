#pragma once

#include "varcert/envelope.hpp"
#include "varcert/epi.hpp"
#include "varcert/errors.hpp"
#include "varcert/extended_real.hpp"
#include "varcert/function_model.hpp"
#include "varcert/gallery.hpp"
#include "varcert/graph_patch.hpp"
#include "varcert/minimize.hpp"
#include "varcert/model_json.hpp"
#include "varcert/monotonicity.hpp"
#include "varcert/norm_space.hpp"
#include "varcert/parallel.hpp"
#include "varcert/regularity.hpp"
#include "varcert/report.hpp"
#include "varcert/rng.hpp"
#include "varcert/sample_plan.hpp"
#include "varcert/sampling.hpp"
#include "varcert/second_order.hpp"
#include "varcert/subdiff_set.hpp"
#include "varcert/tilt.hpp"
#include "varcert/varconvex.hpp"
#include "varcert/vector_ops.hpp"
