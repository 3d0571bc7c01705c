#pragma once

#include "kt/datasets.hpp"
#include "kt/error.hpp"
#include "kt/eval.hpp"
#include "kt/io.hpp"
#include "kt/kernel.hpp"
#include "kt/learner.hpp"
#include "kt/linalg.hpp"
#include "kt/model.hpp"
#include "kt/pipeline.hpp"
#include "kt/teacher.hpp"
