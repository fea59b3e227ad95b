// tvl.hpp - umbrella header for the whole toolkit.
#ifndef TVL_TVL_HPP
#define TVL_TVL_HPP

#include "tvl/ast.hpp"
#include "tvl/client.hpp"
#include "tvl/datagen.hpp"
#include "tvl/dataset.hpp"
#include "tvl/executor.hpp"
#include "tvl/geometry.hpp"
#include "tvl/harness.hpp"
#include "tvl/metrics.hpp"
#include "tvl/parser.hpp"
#include "tvl/printer.hpp"
#include "tvl/prompts.hpp"
#include "tvl/raster.hpp"
#include "tvl/registry.hpp"
#include "tvl/retrieval.hpp"
#include "tvl/schema.hpp"
#include "tvl/sqlgen.hpp"
#include "tvl/store.hpp"
#include "tvl/timestamp.hpp"
#include "tvl/validate.hpp"
#include "tvl/visgen.hpp"

#endif  // TVL_TVL_HPP
