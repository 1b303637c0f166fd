#pragma once

#include "isom/error.hpp"
#include "isom/types.hpp"
#include "isom/norm.hpp"
#include "isom/norm_probes.hpp"
#include "isom/metric.hpp"
#include "isom/cayley_menger.hpp"
#include "isom/fixed_point.hpp"
#include "isom/embedding.hpp"
#include "isom/embed_ell2.hpp"
#include "isom/embed_linf.hpp"
#include "isom/counterexamples.hpp"
#include "isom/snowflake.hpp"
#include "isom/io.hpp"
